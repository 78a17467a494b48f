#pragma once

// Physical-state constructors (downconversion, wedge, NOON), Stokes operators
// and statistics, SU(2) polarization rotations, and the exact heralded
// photon-subtraction pipeline (beam splitter, diagonal-basis herald).
//
// Sign and basis conventions, fixed once and asserted by tests:
//   - phase_shift uses the Jones matrix [[cos(p/2), sin(p/2)], [-sin(p/2), cos(p/2)]],
//     so that <S1> after the shift equals cos(p)*<S1> + sin(p)*<S2>.
//   - circular basis: a_R = (a_H - i a_V)/sqrt2, a_L = (a_H + i a_V)/sqrt2,
//     which makes S3 equal +1 on a single right-circular photon.
//   - the NOON comparison state lives in the R/L basis; the relative phase
//     between its two branches (see noon_relative_phase) is chosen so the
//     central-outcome fringe is a cosine squared peaking at zero phase.

#include <Eigen/Dense>

#include "wedgesim/fock.hpp"

namespace wedgesim {

struct JonesMatrix {
  Eigen::Matrix2cd u;  // acts on the column (a_H, a_V) of mode operators

  double unitarity_deviation() const {
    return (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  }
  bool is_unitary(double tol = 1e-10) const { return unitarity_deviation() <= tol; }

  static JonesMatrix identity();
  // rotation about the S3 axis by phi (radians on the Poincare sphere)
  static JonesMatrix phase_shift(double phi);
  // half-wave plate with fast axis at angle theta to horizontal
  static JonesMatrix half_wave_plate(double theta);
};

struct StokesStats {
  double mean_s1 = 0.0, mean_s2 = 0.0, mean_s3 = 0.0;
  double var_s1 = 0.0, var_s2 = 0.0, var_s3 = 0.0;
};

struct StokesOperators {
  Eigen::MatrixXcd s1, s2, s3;  // (N+1) x (N+1), Hermitian
};

// matrices of S1 = nH - nV, S2 = nP - nM, S3 = nR - nL on the fixed-N subspace
StokesOperators stokes_operators(int n);

StokesStats stokes_stats(const PolarizationState& state);
StokesStats stokes_stats(const DensityMatrix& rho);

// Collinear type-II downconversion state: amplitude tanh(r)^n / cosh(r) on
// |n;n> for 2n <= n_max.  Raw amplitudes by default (norm < 1 for r > 0);
// pass renormalize = true to rescale over the truncated space.
PolarizationState pdc_state(double r, int n_max, bool renormalize = false);

// (|n; n-1> + |n-1; n>)/sqrt2 on 2n-1 photons
PolarizationState wedge_state(int n);

// (|N;0> + e^{i chi} |0;N>)/sqrt2 in the circular basis, written in H/V
PolarizationState noon_state(int n);
// branch phase chi used by noon_state, recorded in serialized output
double noon_relative_phase(int n);

// (N+1)-dimensional representation of the Jones matrix on a photon-number
// conserving state; applied blockwise, exact combinatorial expansion
PolarizationState mode_rotation(const PolarizationState& state, const JonesMatrix& j);

// mode_rotation with JonesMatrix::phase_shift(phi)
PolarizationState phase_shift(const PolarizationState& state, double phi);

// which diagonally polarized one-photon herald fired: P = (H+V)/sqrt2, M = (H-V)/sqrt2
enum class HeraldOutcome { p, m };

struct SubtractionResult {
  PolarizationState conditional_state;  // reflected modes, renormalized
  double success_probability = 0.0;
  HeraldOutcome heralding_outcome = HeraldOutcome::p;
};

// herald fired but the projected component has strictly zero weight
class zero_probability_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full subtraction pipeline: embed the input with transmitted vacuum, apply
// the beam splitter, project the transmitted modes onto exactly one photon of
// the chosen diagonal polarization, renormalize the reflected state.
//
// The quoted success probability counts the single P outcome; accepting the M
// outcome as well (after flipping the sign of its |n-1; n> branch) doubles
// the usable event rate.
SubtractionResult subtract_photon_exact(const PolarizationState& input, double reflectivity,
                                        HeraldOutcome outcome);

// closed form n(1-R)R^(2n-1) for the P-outcome rate on an n-pair input
double subtraction_probability(int n, double reflectivity);

struct OptimalReflectivity {
  double r_star = 0.0;  // 1 - 1/(2n)
  double p_max = 0.0;   // (1 - 1/(2n))^(2n-1) / 2
};
OptimalReflectivity optimal_reflectivity(int n);

// 2 N! / (2N)^N, the heralding efficiency ceiling of an N-photon NOON source
double noon_bottleneck_efficiency(int n);

}  // namespace wedgesim
