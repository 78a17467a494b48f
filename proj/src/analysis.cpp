#include "wedgesim/analysis.hpp"

#include <cmath>
#include <numbers>

namespace wedgesim {

namespace {

int require_fixed_n(const PolarizationState& state, const char* what) {
  const auto support = state.support_photon_number();
  if (!support)
    throw std::invalid_argument(std::string(what) +
                                " must occupy a single fixed photon-number subspace");
  return *support;
}

}  // namespace

std::vector<double> phi_grid(double phi_min, double phi_max, int steps) {
  if (steps < 2) throw std::invalid_argument("grid needs at least two points");
  if (!(phi_min < phi_max)) throw std::invalid_argument("grid bounds must be increasing");
  std::vector<double> grid(steps);
  const double span = phi_max - phi_min;
  for (int i = 0; i < steps; ++i) grid[i] = phi_min + span * i / (steps - 1);
  return grid;
}

std::vector<double> photon_number_distribution(const PolarizationState& state, double phi) {
  const int n = require_fixed_n(state, "state");
  const PolarizationState rotated = phase_shift(state, phi);
  const int offset = n * (n + 1) / 2;
  std::vector<double> probabilities(n + 1);
  for (int k = 0; k <= n; ++k) probabilities[k] = std::norm(rotated.amps[offset + k]);
  return probabilities;
}

FringeSeries fringe_scan(const PolarizationState& state, const BasisLabel2& outcome,
                         const std::vector<double>& grid, std::string state_label) {
  const int n = require_fixed_n(state, "state");
  if (outcome.n_h < 0 || outcome.n_v < 0 || outcome.total() != n)
    throw std::invalid_argument("outcome photon number must match the state");
  FringeSeries series{grid, {}, outcome, std::move(state_label)};
  series.probabilities.reserve(grid.size());
  for (const double phi : grid)
    series.probabilities.push_back(photon_number_distribution(state, phi)[outcome.n_h]);
  return series;
}

StokesSeries stokes_scan(int n, const std::vector<double>& grid) {
  if (n < 1) throw std::invalid_argument("pair number must be at least 1");
  const PolarizationState wedge = wedge_state(n);
  StokesSeries series{grid, {}, {}};
  series.mean_s1.reserve(grid.size());
  series.var_s1.reserve(grid.size());
  for (const double phi : grid) {
    const StokesStats st = stokes_stats(phase_shift(wedge, phi));
    series.mean_s1.push_back(st.mean_s1);
    series.var_s1.push_back(st.var_s1);
  }
  return series;
}

std::array<complex, 6> five_photon_amplitudes(double phi) {
  using std::cos;
  constexpr double qp = std::numbers::pi / 4.0;
  const double root10 = std::sqrt(10.0);
  const double root2 = std::sqrt(2.0);
  const double a50 =
      -(root10 / 16.0) * (cos(2.5 * phi - qp) + cos(1.5 * phi + qp) - 2.0 * cos(0.5 * phi - qp));
  const double a41 = -(root2 / 16.0) * (5.0 * cos(2.5 * phi + qp) - 3.0 * cos(1.5 * phi - qp) -
                                        2.0 * cos(0.5 * phi + qp));
  const double a32 = (1.0 / 8.0) * (5.0 * cos(2.5 * phi - qp) + cos(1.5 * phi + qp) +
                                    2.0 * cos(0.5 * phi - qp));
  const double a23 = (1.0 / 8.0) * (5.0 * cos(2.5 * phi + qp) + cos(1.5 * phi - qp) +
                                    2.0 * cos(0.5 * phi + qp));
  const double a14 = -(root2 / 16.0) * (5.0 * cos(2.5 * phi - qp) - 3.0 * cos(1.5 * phi + qp) -
                                        2.0 * cos(0.5 * phi - qp));
  const double a05 =
      -(root10 / 16.0) * (cos(2.5 * phi + qp) + cos(1.5 * phi - qp) - 2.0 * cos(0.5 * phi + qp));
  return {complex(a05), complex(a14), complex(a23), complex(a32), complex(a41), complex(a50)};
}

double phase_uncertainty(const PolarizationState& state) {
  const StokesStats st = stokes_stats(state);
  if (std::abs(st.mean_s2) <= 1e-10)
    throw std::domain_error("phase estimator undefined for vanishing <S2>");
  return std::sqrt(st.var_s1) / std::abs(st.mean_s2);
}

double heisenberg_reference(int n) {
  if (n < 1) throw std::invalid_argument("photon number must be at least 1");
  return 1.0 / n;
}

namespace {

// annihilation-operator matrix on the full truncated basis
Eigen::MatrixXcd annihilation_matrix(int n_max, Mode mode) {
  const int dim = basis_dimension(n_max);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    BasisLabel2 label = basis_label(i);
    int& occ = (mode == Mode::h) ? label.n_h : label.n_v;
    if (occ == 0) continue;
    const double factor = std::sqrt(static_cast<double>(occ));
    occ -= 1;
    a(basis_index(label), i) = factor;
  }
  return a;
}

// decrement the polarization record by one photon, H or V with equal odds
// and no occupation weighting
DensityMatrix equal_odds_label_loss(const DensityMatrix& rho) {
  DensityMatrix out(rho.n_max);
  const int dim = basis_dimension(rho.n_max);
  for (int i = 0; i < dim; ++i) {
    const BasisLabel2 row = basis_label(i);
    for (int j = 0; j < dim; ++j) {
      const complex v = rho.m(i, j);
      if (v == 0.0) continue;
      const BasisLabel2 col = basis_label(j);
      if (row.n_h >= 1 && col.n_h >= 1)
        out.m(basis_index({row.n_h - 1, row.n_v}), basis_index({col.n_h - 1, col.n_v})) +=
            0.5 * v;
      if (row.n_v >= 1 && col.n_v >= 1)
        out.m(basis_index({row.n_h, row.n_v - 1}), basis_index({col.n_h, col.n_v - 1})) +=
            0.5 * v;
    }
  }
  const double trace = out.trace_real();
  if (trace < zero_norm_threshold) throw std::domain_error("loss channel annihilated the state");
  out.m /= trace;
  return out;
}

}  // namespace

DensityMatrix apply_unpolarized_single_photon_loss(const DensityMatrix& rho) {
  if (std::abs(rho.trace_real() - 1.0) > 1e-9)
    throw std::invalid_argument("density matrix must have unit trace");
  const auto support = rho.support_photon_number();
  if (!support)
    throw std::invalid_argument("density matrix must occupy a single fixed-N subspace");
  if (*support < 1) throw std::invalid_argument("vacuum has no photon to lose");
  const Eigen::MatrixXcd ah = annihilation_matrix(rho.n_max, Mode::h);
  const Eigen::MatrixXcd av = annihilation_matrix(rho.n_max, Mode::v);
  DensityMatrix out(rho.n_max);
  out.m = ah * rho.m * ah.adjoint() + av * rho.m * av.adjoint();
  out.m /= out.trace_real();
  return out;
}

LossModelResult loss_error_analysis(int n, double p_err) {
  if (n < 2) throw std::invalid_argument("error model needs at least two pairs");
  if (p_err < 0.0 || p_err > 1.0) throw std::invalid_argument("error probability outside [0,1]");
  const int n_max = 2 * n + 1;

  // error branch: one extra pair emitted, two of its 2n+1 photons lost
  DensityMatrix lossy = DensityMatrix::from_pure(with_truncation(wedge_state(n + 1), n_max));
  lossy = equal_odds_label_loss(equal_odds_label_loss(lossy));

  const DensityMatrix good = DensityMatrix::from_pure(with_truncation(wedge_state(n), n_max));
  DensityMatrix mixture(n_max);
  mixture.m = (1.0 - p_err) * good.m + p_err * lossy.m;

  LossModelResult result;
  result.p_err = p_err;
  result.var_s1_lossy_branch = stokes_stats(lossy).var_s1;
  result.var_s1_total = stokes_stats(mixture).var_s1;
  // subtract the baseline as computed (it is 1 up to rounding), so that a
  // zero-weight error branch reports an increase of exactly zero
  result.increase = result.var_s1_total - stokes_stats(good).var_s1;
  return result;
}

FringePeak find_fringe_peak(const PolarizationState& state, const BasisLabel2& outcome,
                            double phi_lo, double phi_hi) {
  const int n = require_fixed_n(state, "state");
  if (outcome.total() != n)
    throw std::invalid_argument("outcome photon number must match the state");
  const auto probability = [&](double phi) {
    return photon_number_distribution(state, phi)[outcome.n_h];
  };

  const std::vector<double> coarse = phi_grid(phi_lo, phi_hi, 721);
  int best = 0;
  double best_p = -1.0;
  for (int i = 0; i < static_cast<int>(coarse.size()); ++i) {
    const double p = probability(coarse[i]);
    if (p > best_p) {
      best_p = p;
      best = i;
    }
  }
  double a = coarse[std::max(best - 1, 0)];
  double b = coarse[std::min(best + 1, static_cast<int>(coarse.size()) - 1)];

  constexpr double ratio = 0.6180339887498949;  // golden section
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  while (b - a > 1e-6) {
    if (probability(c) > probability(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - ratio * (b - a);
    d = a + ratio * (b - a);
  }
  const double phi_star = 0.5 * (a + b);
  return {phi_star, probability(phi_star)};
}

}  // namespace wedgesim
