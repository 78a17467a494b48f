#include "wedgesim/fock.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

namespace wedgesim {

namespace detail {

double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative integer");
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  // multiplicative form keeps every intermediate an exact integer
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

complex ipow(complex b, int e) {
  complex r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace detail

int basis_dimension(int n_max) {
  if (n_max < 0) throw std::invalid_argument("truncation must be non-negative");
  return (n_max + 1) * (n_max + 2) / 2;
}

int basis_index(const BasisLabel2& label) {
  if (label.n_h < 0 || label.n_v < 0) throw std::invalid_argument("negative photon count");
  const int n = label.total();
  return n * (n + 1) / 2 + label.n_h;
}

BasisLabel2 basis_label(int index) {
  if (index < 0) throw std::invalid_argument("negative basis index");
  int n = 0;
  while ((n + 1) * (n + 2) / 2 <= index) ++n;
  const int k = index - n * (n + 1) / 2;
  return {k, n - k};
}

std::vector<BasisLabel2> enumerate_fixed_n_basis(int n) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  std::vector<BasisLabel2> labels;
  labels.reserve(n + 1);
  for (int k = 0; k <= n; ++k) labels.push_back({k, n - k});
  return labels;
}

complex PolarizationState::amplitude(const BasisLabel2& label) const {
  if (label.total() > n_max) return 0.0;
  return amps[basis_index(label)];
}

std::optional<int> PolarizationState::support_photon_number(double tol) const {
  std::optional<int> found;
  for (int n = 0; n <= n_max; ++n) {
    const int offset = n * (n + 1) / 2;
    const double weight = amps.segment(offset, n + 1).squaredNorm();
    if (weight > tol) {
      if (found) return std::nullopt;
      found = n;
    }
  }
  return found;
}

PolarizationState basis_state(int n_max, const BasisLabel2& label) {
  if (label.total() > n_max) throw std::invalid_argument("label outside truncation");
  PolarizationState state(n_max);
  state.amps[basis_index(label)] = 1.0;
  return state;
}

PolarizationState with_truncation(const PolarizationState& state, int n_max) {
  if (n_max < state.n_max) {
    // shrinking is allowed only when the discarded tail is empty
    for (int i = basis_dimension(n_max); i < state.amps.size(); ++i)
      if (state.amps[i] != 0.0) throw std::invalid_argument("truncation would drop amplitudes");
  }
  PolarizationState out(n_max);
  const int keep = std::min<int>(state.amps.size(), out.amps.size());
  out.amps.head(keep) = state.amps.head(keep);
  return out;
}

complex inner_product(const PolarizationState& a, const PolarizationState& b) {
  if (a.n_max != b.n_max) throw std::invalid_argument("truncation mismatch");
  return a.amps.dot(b.amps);  // Eigen conjugates the first operand
}

PolarizationState apply_annihilation(const PolarizationState& state, Mode mode) {
  PolarizationState out(state.n_max);
  for (int i = 0; i < state.amps.size(); ++i) {
    const complex a = state.amps[i];
    if (a == 0.0) continue;
    BasisLabel2 label = basis_label(i);
    int& occ = (mode == Mode::h) ? label.n_h : label.n_v;
    if (occ == 0) continue;
    const double factor = std::sqrt(static_cast<double>(occ));
    occ -= 1;
    out.amps[basis_index(label)] += factor * a;
  }
  return out;
}

PolarizationState apply_creation(const PolarizationState& state, Mode mode) {
  PolarizationState out(state.n_max);
  for (int i = 0; i < state.amps.size(); ++i) {
    const complex a = state.amps[i];
    if (a == 0.0) continue;
    BasisLabel2 label = basis_label(i);
    if (label.total() >= state.n_max)
      throw std::domain_error("creation operator leaves the truncated space");
    int& occ = (mode == Mode::h) ? label.n_h : label.n_v;
    occ += 1;
    out.amps[basis_index(label)] += std::sqrt(static_cast<double>(occ)) * a;
  }
  return out;
}

PolarizationState normalized(const PolarizationState& state) {
  const double n = state.norm();
  if (n < zero_norm_threshold) throw std::domain_error("cannot normalize a zero-norm state");
  PolarizationState out = state;
  out.amps /= n;
  return out;
}

ProjectionResult project_total_photon_number(const PolarizationState& state, int n) {
  if (n < 0 || n > state.n_max) throw std::invalid_argument("projection outside truncation");
  const int offset = n * (n + 1) / 2;
  ProjectionResult result;
  result.probability = state.amps.segment(offset, n + 1).squaredNorm();
  if (std::sqrt(result.probability) < zero_norm_threshold) return result;  // flagged empty
  PolarizationState projected(state.n_max);
  projected.amps.segment(offset, n + 1) =
      state.amps.segment(offset, n + 1) / std::sqrt(result.probability);
  result.state = std::move(projected);
  return result;
}

Eigen::MatrixXcd pair_rotation_matrix(int n, const Eigen::Matrix2cd& u) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    // |k; n-k> = (a1+)^k (a2+)^(n-k) |0> / sqrt(k!(n-k)!); substitute the
    // rotated operators and expand both powers binomially
    for (int i = 0; i <= k; ++i) {
      const complex ci =
          detail::binomial(k, i) * detail::ipow(u(0, 0), i) * detail::ipow(u(1, 0), k - i);
      for (int j = 0; j <= n - k; ++j) {
        const complex cj = detail::binomial(n - k, j) * detail::ipow(u(0, 1), j) *
                           detail::ipow(u(1, 1), n - k - j);
        m(i + j, k) += ci * cj;
      }
    }
    const double denom = std::sqrt(detail::factorial(k) * detail::factorial(n - k));
    for (int p = 0; p <= n; ++p)
      m(p, k) *= std::sqrt(detail::factorial(p) * detail::factorial(n - p)) / denom;
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

struct FourModeBasis {
  std::vector<FourModeLabel> labels;
  std::unordered_map<int, int> index;  // packed label -> position
};

int pack(const FourModeLabel& l) {
  return ((l.h_r * 64 + l.v_r) * 64 + l.h_t) * 64 + l.v_t;
}

const FourModeBasis& four_mode_basis(int n_max) {
  if (n_max < 0) throw std::invalid_argument("truncation must be non-negative");
  if (n_max > 60) throw std::invalid_argument("four-mode truncation too large");
  static std::mutex mu;
  static std::map<int, FourModeBasis> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n_max);
  if (it != cache.end()) return it->second;
  FourModeBasis basis;
  for (int n = 0; n <= n_max; ++n)
    for (int h_r = 0; h_r <= n; ++h_r)
      for (int v_r = 0; v_r <= n - h_r; ++v_r)
        for (int h_t = 0; h_t <= n - h_r - v_r; ++h_t) {
          const FourModeLabel label{h_r, v_r, h_t, n - h_r - v_r - h_t};
          basis.index[pack(label)] = static_cast<int>(basis.labels.size());
          basis.labels.push_back(label);
        }
  return cache.emplace(n_max, std::move(basis)).first->second;
}

}  // namespace

const std::vector<FourModeLabel>& four_mode_labels(int n_max) {
  return four_mode_basis(n_max).labels;
}

int four_mode_dimension(int n_max) {
  return static_cast<int>(four_mode_basis(n_max).labels.size());
}

int four_mode_index(int n_max, const FourModeLabel& label) {
  const auto& basis = four_mode_basis(n_max);
  auto it = basis.index.find(pack(label));
  if (it == basis.index.end()) throw std::invalid_argument("label outside truncation");
  return it->second;
}

complex FourModeState::amplitude(const FourModeLabel& label) const {
  if (label.total() > n_max) return 0.0;
  return amps[four_mode_index(n_max, label)];
}

FourModeState embed_with_transmitted_vacuum(const PolarizationState& state) {
  FourModeState out(state.n_max);
  for (int i = 0; i < state.amps.size(); ++i) {
    if (state.amps[i] == 0.0) continue;
    const BasisLabel2 label = basis_label(i);
    out.amps[four_mode_index(out.n_max, {label.n_h, label.n_v, 0, 0})] = state.amps[i];
  }
  return out;
}

FourModeState beam_splitter_unitary(const FourModeState& input, double reflectivity) {
  if (!(reflectivity > 0.0 && reflectivity < 1.0))
    throw std::invalid_argument("reflectivity must lie in (0,1)");
  const double sr = std::sqrt(reflectivity);
  const double st = std::sqrt(1.0 - reflectivity);
  Eigen::Matrix2cd u;  // creation-operator map on the (reflected, transmitted) pair
  u << sr, -st,  //
      st, sr;
  std::vector<Eigen::MatrixXcd> pair(input.n_max + 1);
  for (int n = 0; n <= input.n_max; ++n) pair[n] = pair_rotation_matrix(n, u);

  const auto& labels = four_mode_labels(input.n_max);
  FourModeState out(input.n_max);
  for (int i = 0; i < input.amps.size(); ++i) {
    const complex a = input.amps[i];
    if (a == 0.0) continue;
    const FourModeLabel& l = labels[i];
    const int nh = l.h_r + l.h_t;  // per-polarization pair totals are conserved
    const int nv = l.v_r + l.v_t;
    const Eigen::MatrixXcd& mh = pair[nh];
    const Eigen::MatrixXcd& mv = pair[nv];
    for (int hp = 0; hp <= nh; ++hp)
      for (int vp = 0; vp <= nv; ++vp) {
        const complex c = a * mh(hp, l.h_r) * mv(vp, l.v_r);
        if (c == 0.0) continue;
        out.amps[four_mode_index(out.n_max, {hp, vp, nh - hp, nv - vp})] += c;
      }
  }
  return out;
}

DensityMatrix DensityMatrix::from_pure(const PolarizationState& state) {
  DensityMatrix rho(state.n_max);
  rho.m = state.amps * state.amps.adjoint();
  return rho;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (m + m.adjoint()));
  return solver.eigenvalues().minCoeff();
}

std::optional<int> DensityMatrix::support_photon_number(double tol) const {
  std::optional<int> found;
  for (int n = 0; n <= n_max; ++n) {
    const int offset = n * (n + 1) / 2;
    const double weight = m.diagonal().segment(offset, n + 1).real().sum();
    if (std::abs(weight) > tol) {
      if (found) return std::nullopt;
      found = n;
    }
  }
  return found;
}

DensityMatrix partial_trace_transmitted(const FourModeState& state) {
  const auto& labels = four_mode_labels(state.n_max);
  // group amplitudes by their transmitted occupation
  std::unordered_map<int, std::vector<std::pair<int, complex>>> groups;
  for (int i = 0; i < state.amps.size(); ++i) {
    const complex a = state.amps[i];
    if (a == 0.0) continue;
    const FourModeLabel& l = labels[i];
    const int key = l.h_t * 64 + l.v_t;
    groups[key].push_back({basis_index({l.h_r, l.v_r}), a});
  }
  DensityMatrix rho(state.n_max);
  for (const auto& [key, entries] : groups)
    for (const auto& [row, va] : entries)
      for (const auto& [col, vb] : entries) rho.m(row, col) += va * std::conj(vb);
  return rho;
}

}  // namespace wedgesim
