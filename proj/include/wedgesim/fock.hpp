#pragma once

// Truncated two-mode and four-mode Fock-space algebra: basis enumeration,
// state vectors, ladder operators, projections, beam splitter, partial trace.
//
// Basis ordering for the two polarization modes (H, V): states |n_H; n_V> are
// grouped into fixed-N blocks ascending in N = n_H + n_V, and inside a block
// indexed by k = n_H ascending.  This makes S1 diagonal with entries 2k - N
// and gives all serialized output a canonical row order.

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace wedgesim {

using complex = std::complex<double>;

// renormalizing anything shorter than this is an error, never a silent NaN
inline constexpr double zero_norm_threshold = 1e-14;

enum class Mode { h, v };

struct BasisLabel2 {
  int n_h = 0;
  int n_v = 0;

  int total() const { return n_h + n_v; }
  bool operator==(const BasisLabel2&) const = default;
};

// number of labels with n_H + n_V <= n_max
int basis_dimension(int n_max);
// position of a label in the canonical order (block offset N(N+1)/2 plus n_H)
int basis_index(const BasisLabel2& label);
BasisLabel2 basis_label(int index);
// [(0,N), (1,N-1), ..., (N,0)]
std::vector<BasisLabel2> enumerate_fixed_n_basis(int n);

// Pure state of the two polarization modes on a truncated Fock space.
// Values are treated as immutable once an operation has returned them.
struct PolarizationState {
  int n_max = 0;
  Eigen::VectorXcd amps;  // basis_dimension(n_max) entries, canonical order

  explicit PolarizationState(int n_max_)
      : n_max(n_max_), amps(Eigen::VectorXcd::Zero(basis_dimension(n_max_))) {
    if (n_max_ < 0) throw std::invalid_argument("truncation must be non-negative");
  }

  complex amplitude(const BasisLabel2& label) const;
  double norm() const { return amps.norm(); }
  // total photon number if all weight sits in one fixed-N block
  std::optional<int> support_photon_number(double tol = 1e-12) const;
};

PolarizationState basis_state(int n_max, const BasisLabel2& label);
// copy into a larger truncation (amplitudes unchanged)
PolarizationState with_truncation(const PolarizationState& state, int n_max);

// conjugate-linear in the first argument
complex inner_product(const PolarizationState& a, const PolarizationState& b);

// |n_H; n_V> -> sqrt(n_mode) times the decremented label; output unnormalized
PolarizationState apply_annihilation(const PolarizationState& state, Mode mode);
// throws if a populated label would leave the truncated space
PolarizationState apply_creation(const PolarizationState& state, Mode mode);

// scale to unit norm; throws below zero_norm_threshold
PolarizationState normalized(const PolarizationState& state);

struct ProjectionResult {
  double probability = 0.0;
  std::optional<PolarizationState> state;  // empty when the weight vanishes
};

// restriction to n_H + n_V = n, renormalized, with its probability weight
ProjectionResult project_total_photon_number(const PolarizationState& state, int n);

// (N+1) x (N+1) matrix of the transform induced on a fixed-N two-mode
// subspace by a 2x2 matrix u acting on the creation-operator pair:
//   a_1+ -> u00 a_1+ + u10 a_2+,   a_2+ -> u01 a_1+ + u11 a_2+
// Row/column index is the photon count in mode 1.  Built by exact polynomial
// expansion of the rotated operators (binomial coefficients and factorials
// accumulated from integers), not by matrix exponentiation.
Eigen::MatrixXcd pair_rotation_matrix(int n, const Eigen::Matrix2cd& u);

// ---------------------------------------------------------------------------
// four-mode layer: reflected (r) and transmitted (t) copies of H and V

struct FourModeLabel {
  int h_r = 0;
  int v_r = 0;
  int h_t = 0;
  int v_t = 0;

  int total() const { return h_r + v_r + h_t + v_t; }
  bool operator==(const FourModeLabel&) const = default;
};

// canonical enumeration of four-mode labels with total <= n_max:
// ascending total, then lexicographic in (h_r, v_r, h_t)
const std::vector<FourModeLabel>& four_mode_labels(int n_max);
int four_mode_dimension(int n_max);
int four_mode_index(int n_max, const FourModeLabel& label);

struct FourModeState {
  int n_max = 0;
  Eigen::VectorXcd amps;  // indexed per four_mode_labels(n_max)

  explicit FourModeState(int n_max_)
      : n_max(n_max_), amps(Eigen::VectorXcd::Zero(four_mode_dimension(n_max_))) {
    if (n_max_ < 0) throw std::invalid_argument("truncation must be non-negative");
  }

  complex amplitude(const FourModeLabel& label) const;
  double norm() const { return amps.norm(); }
};

// input state in the reflected modes, vacuum in the transmitted modes
FourModeState embed_with_transmitted_vacuum(const PolarizationState& state);

// Polarization-preserving beam splitter of reflectivity R in (0,1):
//   a_r -> sqrt(R) a_r + sqrt(1-R) a_t,   a_t -> sqrt(R) a_t - sqrt(1-R) a_r
// applied identically to H and V.  Exactly photon-number conserving.
FourModeState beam_splitter_unitary(const FourModeState& input, double reflectivity);

// Hermitian PSD matrix over the two-mode basis (canonical order)
struct DensityMatrix {
  int n_max = 0;
  Eigen::MatrixXcd m;

  explicit DensityMatrix(int n_max_)
      : n_max(n_max_),
        m(Eigen::MatrixXcd::Zero(basis_dimension(n_max_), basis_dimension(n_max_))) {
    if (n_max_ < 0) throw std::invalid_argument("truncation must be non-negative");
  }

  static DensityMatrix from_pure(const PolarizationState& state);

  double trace_real() const { return m.trace().real(); }
  double hermiticity_deviation() const { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
  // photon number if all trace weight sits in one fixed-N block
  std::optional<int> support_photon_number(double tol = 1e-12) const;
};

// reduced density matrix of the reflected modes
DensityMatrix partial_trace_transmitted(const FourModeState& state);

namespace detail {
// n! accumulated by iterated multiplication (relative error a few ulp at n <= 30)
double factorial(int n);
// exact for the label ranges used here (values below 2^53)
double binomial(int n, int k);
// b^e for integer e >= 0 by repeated multiplication; ipow(anything, 0) == 1
complex ipow(complex b, int e);
}  // namespace detail

}  // namespace wedgesim
