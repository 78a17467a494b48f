#include "wedgesim/polarization.hpp"

#include <cmath>

namespace wedgesim {

namespace {

constexpr double norm_check_tolerance = 1e-9;

using detail::binomial;
using detail::factorial;
using detail::ipow;

void require_normalized(double norm, const char* what) {
  if (std::abs(norm - 1.0) > norm_check_tolerance)
    throw std::invalid_argument(std::string(what) + " must be normalized");
}

}  // namespace

JonesMatrix JonesMatrix::identity() {
  return {Eigen::Matrix2cd::Identity()};
}

JonesMatrix JonesMatrix::phase_shift(double phi) {
  const double c = std::cos(phi / 2.0);
  const double s = std::sin(phi / 2.0);
  JonesMatrix j;
  j.u << c, s,  //
      -s, c;
  return j;
}

JonesMatrix JonesMatrix::half_wave_plate(double theta) {
  const double c = std::cos(2.0 * theta);
  const double s = std::sin(2.0 * theta);
  JonesMatrix j;
  j.u << c, s,  //
      s, -c;
  return j;
}

StokesOperators stokes_operators(int n) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  const int dim = n + 1;
  StokesOperators ops{Eigen::MatrixXcd::Zero(dim, dim), Eigen::MatrixXcd::Zero(dim, dim),
                      Eigen::MatrixXcd::Zero(dim, dim)};
  for (int k = 0; k <= n; ++k) ops.s1(k, k) = 2.0 * k - n;
  // aH+ aV takes |k; n-k> to sqrt((k+1)(n-k)) |k+1; n-k-1>
  for (int k = 0; k < n; ++k) {
    const double amp = std::sqrt(static_cast<double>((k + 1) * (n - k)));
    ops.s2(k + 1, k) = amp;
    ops.s2(k, k + 1) = amp;
    ops.s3(k + 1, k) = complex(0.0, -amp);
    ops.s3(k, k + 1) = complex(0.0, amp);
  }
  return ops;
}

namespace {

double clamp_variance(double v) {
  if (v < -1e-10) throw std::logic_error("variance below tolerance floor");
  return v < 0.0 ? 0.0 : v;
}

}  // namespace

StokesStats stokes_stats(const PolarizationState& state) {
  require_normalized(state.norm(), "state");
  const auto support = state.support_photon_number();
  if (!support)
    throw std::invalid_argument("state must occupy a single fixed photon-number subspace");
  const int n = *support;
  const int offset = n * (n + 1) / 2;
  const Eigen::VectorXcd block = state.amps.segment(offset, n + 1);
  const StokesOperators ops = stokes_operators(n);
  StokesStats st;
  const auto expect = [&block](const Eigen::MatrixXcd& op, double& mean, double& var) {
    const Eigen::VectorXcd applied = op * block;
    mean = block.dot(applied).real();
    var = clamp_variance(applied.squaredNorm() - mean * mean);
  };
  expect(ops.s1, st.mean_s1, st.var_s1);
  expect(ops.s2, st.mean_s2, st.var_s2);
  expect(ops.s3, st.mean_s3, st.var_s3);
  return st;
}

StokesStats stokes_stats(const DensityMatrix& rho) {
  require_normalized(rho.trace_real(), "density matrix");
  if (rho.hermiticity_deviation() > 1e-10)
    throw std::invalid_argument("density matrix must be Hermitian");
  StokesStats st;
  double* means[3] = {&st.mean_s1, &st.mean_s2, &st.mean_s3};
  double* vars[3] = {&st.var_s1, &st.var_s2, &st.var_s3};
  double second[3] = {0.0, 0.0, 0.0};
  // Stokes operators conserve photon number, so only the fixed-N diagonal
  // blocks of rho contribute
  for (int n = 0; n <= rho.n_max; ++n) {
    const int offset = n * (n + 1) / 2;
    const Eigen::MatrixXcd block = rho.m.block(offset, offset, n + 1, n + 1);
    if (block.cwiseAbs().maxCoeff() < 1e-300) continue;
    const StokesOperators ops = stokes_operators(n);
    const Eigen::MatrixXcd* matrices[3] = {&ops.s1, &ops.s2, &ops.s3};
    for (int i = 0; i < 3; ++i) {
      *means[i] += (*matrices[i] * block).trace().real();
      second[i] += (*matrices[i] * *matrices[i] * block).trace().real();
    }
  }
  for (int i = 0; i < 3; ++i) *vars[i] = clamp_variance(second[i] - *means[i] * *means[i]);
  return st;
}

PolarizationState pdc_state(double r, int n_max, bool renormalize) {
  if (r < 0.0) throw std::invalid_argument("squeezing parameter must be non-negative");
  if (n_max < 0 || n_max % 2 != 0) throw std::invalid_argument("truncation must be even");
  PolarizationState state(n_max);
  const double t = std::tanh(r);
  const double prefactor = 1.0 / std::cosh(r);
  for (int n = 0; 2 * n <= n_max; ++n) {
    const double amp = std::pow(t, n) * prefactor;
    if (r > 0.0 && amp < 1e-300)
      throw std::invalid_argument("truncation requests amplitudes below representable range");
    state.amps[basis_index({n, n})] = amp;
  }
  return renormalize ? normalized(state) : state;
}

PolarizationState wedge_state(int n) {
  if (n < 1) throw std::invalid_argument("pair number must be at least 1");
  PolarizationState state(2 * n - 1);
  const double amp = 1.0 / std::sqrt(2.0);
  state.amps[basis_index({n, n - 1})] = amp;
  state.amps[basis_index({n - 1, n})] = amp;
  return state;
}

double noon_relative_phase(int n) {
  if (n < 1) throw std::invalid_argument("photon number must be at least 1");
  // align the two branch amplitudes on the central outcome k = floor(N/2) so
  // that its fringe is maximal at zero phase
  const int k = n / 2;
  const complex a = ipow(complex(0.0, 1.0), n - k);
  const complex b = ipow(complex(0.0, -1.0), n - k);
  return std::arg(a * std::conj(b));
}

PolarizationState noon_state(int n) {
  if (n < 1) throw std::invalid_argument("photon number must be at least 1");
  const double chi = noon_relative_phase(n);
  const complex branch_phase = std::exp(complex(0.0, chi));
  PolarizationState state(n);
  const double scale = 1.0 / (std::pow(2.0, n / 2.0) * std::sqrt(2.0));
  for (int k = 0; k <= n; ++k) {
    // (a_R+)^N expands over (a_H+)^k (i a_V+)^(N-k); likewise a_L+ with -i
    const complex right = ipow(complex(0.0, 1.0), n - k);
    const complex left = ipow(complex(0.0, -1.0), n - k);
    state.amps[basis_index({k, n - k})] =
        std::sqrt(binomial(n, k)) * scale * (right + branch_phase * left);
  }
  return state;
}

PolarizationState mode_rotation(const PolarizationState& state, const JonesMatrix& j) {
  if (!j.is_unitary()) throw std::invalid_argument("Jones matrix must be unitary");
  PolarizationState out(state.n_max);
  for (int n = 0; n <= state.n_max; ++n) {
    const int offset = n * (n + 1) / 2;
    const Eigen::VectorXcd block = state.amps.segment(offset, n + 1);
    if (block.squaredNorm() == 0.0) continue;
    out.amps.segment(offset, n + 1) = pair_rotation_matrix(n, j.u) * block;
  }
  return out;
}

PolarizationState phase_shift(const PolarizationState& state, double phi) {
  return mode_rotation(state, JonesMatrix::phase_shift(phi));
}

SubtractionResult subtract_photon_exact(const PolarizationState& input, double reflectivity,
                                        HeraldOutcome outcome) {
  if (!(reflectivity > 0.0 && reflectivity < 1.0))
    throw std::invalid_argument("reflectivity must lie in (0,1)");
  require_normalized(input.norm(), "input state");
  const auto support = input.support_photon_number();
  if (!support || *support < 2 || *support % 2 != 0)
    throw std::invalid_argument("input must occupy a single even photon-number subspace");

  const FourModeState split =
      beam_splitter_unitary(embed_with_transmitted_vacuum(input), reflectivity);

  // project the transmitted modes onto (|1;0> +/- |0;1>)/sqrt2
  const double herald_sign = (outcome == HeraldOutcome::p) ? 1.0 : -1.0;
  const double root_half = 1.0 / std::sqrt(2.0);
  PolarizationState conditional(input.n_max);
  const auto& labels = four_mode_labels(split.n_max);
  for (int i = 0; i < split.amps.size(); ++i) {
    const complex a = split.amps[i];
    if (a == 0.0) continue;
    const FourModeLabel& l = labels[i];
    if (l.h_t + l.v_t != 1) continue;
    const double weight = (l.h_t == 1) ? root_half : herald_sign * root_half;
    conditional.amps[basis_index({l.h_r, l.v_r})] += weight * a;
  }

  SubtractionResult result{PolarizationState(input.n_max), conditional.amps.squaredNorm(),
                           outcome};
  if (std::sqrt(result.success_probability) < zero_norm_threshold)
    throw zero_probability_error("herald outcome has zero probability");
  result.conditional_state = normalized(conditional);
  return result;
}

double subtraction_probability(int n, double reflectivity) {
  if (n < 1) throw std::invalid_argument("pair number must be at least 1");
  if (!(reflectivity > 0.0 && reflectivity < 1.0))
    throw std::invalid_argument("reflectivity must lie in (0,1)");
  return n * (1.0 - reflectivity) * std::pow(reflectivity, 2 * n - 1);
}

OptimalReflectivity optimal_reflectivity(int n) {
  if (n < 1) throw std::invalid_argument("pair number must be at least 1");
  const double r_star = 1.0 - 1.0 / (2.0 * n);
  return {r_star, std::pow(r_star, 2 * n - 1) / 2.0};
}

double noon_bottleneck_efficiency(int n) {
  if (n < 1) throw std::invalid_argument("photon number must be at least 1");
  // 2 N!/(2N)^N accumulated as a product of factors k/(2N), each below 1
  double value = 2.0;
  for (int k = 1; k <= n; ++k) value *= static_cast<double>(k) / (2.0 * n);
  return value;
}

}  // namespace wedgesim
