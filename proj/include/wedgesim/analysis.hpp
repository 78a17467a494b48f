#pragma once

// Parameter scans, the closed-form five-photon amplitudes, phase-uncertainty
// estimates, and the photon-loss error model.

#include <array>
#include <string>
#include <vector>

#include "wedgesim/fock.hpp"
#include "wedgesim/polarization.hpp"

namespace wedgesim {

// inclusive endpoints, steps >= 2 equally spaced values
std::vector<double> phi_grid(double phi_min, double phi_max, int steps);

// probabilities |<k; N-k| U_phi |state>|^2 indexed by k = n_H
std::vector<double> photon_number_distribution(const PolarizationState& state, double phi);

struct FringeSeries {
  std::vector<double> phi_values;
  std::vector<double> probabilities;
  BasisLabel2 outcome_label;
  std::string state_label;
};

FringeSeries fringe_scan(const PolarizationState& state, const BasisLabel2& outcome,
                         const std::vector<double>& grid, std::string state_label = {});

struct StokesSeries {
  std::vector<double> phi_values;
  std::vector<double> mean_s1;
  std::vector<double> var_s1;
};

// S1 statistics of the phase-shifted wedge state across the grid; matches
// the closed forms n sin(phi) and 1 + (n^2 - 2) sin^2(phi)
StokesSeries stokes_scan(int n, const std::vector<double>& grid);

// Closed-form five-photon amplitudes <k; 5-k| U_phi |wedge(3)>, indexed by
// k = n_H ascending (element [5] is <5;0|, element [0] is <0;5|).  Only the
// squared magnitudes are convention-free; the overall phase of each entry
// follows the same sign convention as phase_shift.
std::array<complex, 6> five_photon_amplitudes(double phi);

// sqrt(var_S1)/|<S2>|, the phase resolution of the S1-based estimator
double phase_uncertainty(const PolarizationState& state);

// 1/N reference line for an N-photon probe
double heisenberg_reference(int n);

// Occupation-weighted unpolarized loss: the normalized mixture proportional
// to a_H rho a_H+ + a_V rho a_V+, supported one photon lower.
DensityMatrix apply_unpolarized_single_photon_loss(const DensityMatrix& rho);

struct LossModelResult {
  double p_err = 0.0;
  double var_s1_lossy_branch = 0.0;
  double var_s1_total = 0.0;
  double increase = 0.0;  // var_s1_total - 1
};

// Error model for one extra downconversion pair with two photons lost before
// detection: mixes wedge(n) with weight 1 - p_err against the twice-lossy
// wedge(n+1) branch with weight p_err, and reports the S1 variance budget.
// Each loss is booked as an independent fair coin on the polarization record
// (H or V with equal odds, no occupation weighting), which fixes the lossy
// branch variance at 3 and the variance increase at exactly 2 p_err.
LossModelResult loss_error_analysis(int n, double p_err);

struct FringePeak {
  double phi_star = 0.0;
  double probability = 0.0;
};

// coarse grid pass then golden-section refinement to 1e-6 in phi
FringePeak find_fringe_peak(const PolarizationState& state, const BasisLabel2& outcome,
                            double phi_lo, double phi_hi);

}  // namespace wedgesim
