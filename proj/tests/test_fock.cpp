#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wedgesim/fock.hpp"
#include "wedgesim/polarization.hpp"

using namespace wedgesim;

namespace {

PolarizationState random_fixed_n_state(std::mt19937& rng, int n_max, int n) {
  std::normal_distribution<double> gauss;
  PolarizationState state(n_max);
  const int offset = n * (n + 1) / 2;
  for (int k = 0; k <= n; ++k) state.amps[offset + k] = complex(gauss(rng), gauss(rng));
  return normalized(state);
}

FourModeState random_four_mode_state(std::mt19937& rng, int n_max, int n) {
  std::normal_distribution<double> gauss;
  FourModeState state(n_max);
  const auto& labels = four_mode_labels(n_max);
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i].total() == n) state.amps[i] = complex(gauss(rng), gauss(rng));
  state.amps /= state.norm();
  return state;
}

}  // namespace

TEST_CASE("fixed-N basis enumeration") {
  CHECK(enumerate_fixed_n_basis(0) == std::vector<BasisLabel2>{{0, 0}});
  CHECK(enumerate_fixed_n_basis(1) == std::vector<BasisLabel2>{{0, 1}, {1, 0}});
  const auto five = enumerate_fixed_n_basis(5);
  CHECK(five.size() == 6);
  CHECK(five[3] == BasisLabel2{3, 2});
  CHECK_THROWS_AS(enumerate_fixed_n_basis(-1), std::invalid_argument);
}

TEST_CASE("basis index round trip and dimensions") {
  for (int n_max : {0, 1, 4, 9}) CHECK(basis_dimension(n_max) == (n_max + 1) * (n_max + 2) / 2);
  for (int i = 0; i < basis_dimension(8); ++i) {
    const BasisLabel2 label = basis_label(i);
    CHECK(basis_index(label) == i);
    CHECK(label.total() <= 8);
  }
  // fixed-N four-mode block has dimension (N+1)(N+2)(N+3)/6
  for (int n = 0; n <= 6; ++n) {
    int count = 0;
    for (const auto& label : four_mode_labels(6))
      if (label.total() == n) ++count;
    CHECK(count == (n + 1) * (n + 2) * (n + 3) / 6);
  }
}

TEST_CASE("inner products") {
  const auto h = basis_state(3, {1, 0});
  const auto v = basis_state(3, {0, 1});
  CHECK(inner_product(h, h) == complex(1.0));
  CHECK(inner_product(h, v) == complex(0.0));
  CHECK(std::abs(inner_product(wedge_state(3), wedge_state(3)) - 1.0) < 1e-15);
  CHECK_THROWS_AS(inner_product(h, basis_state(4, {1, 0})), std::invalid_argument);
  // conjugate linearity in the first argument
  PolarizationState scaled = h;
  scaled.amps *= complex(0.0, 2.0);
  CHECK(std::abs(inner_product(scaled, h) - complex(0.0, -2.0)) < 1e-15);
}

TEST_CASE("annihilation operators") {
  const auto a_h = apply_annihilation(basis_state(3, {2, 1}), Mode::h);
  CHECK(std::abs(a_h.amplitude({1, 1}) - std::sqrt(2.0)) < 1e-15);
  CHECK(a_h.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  CHECK(apply_annihilation(basis_state(3, {0, 3}), Mode::h).norm() == 0.0);

  PolarizationState mixed(2);
  mixed.amps[basis_index({1, 1})] = 1.0 / std::sqrt(2.0);
  mixed.amps[basis_index({2, 0})] = 1.0 / std::sqrt(2.0);
  const auto dropped = apply_annihilation(mixed, Mode::v);
  CHECK(std::abs(dropped.amplitude({1, 0}) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(dropped.amps.squaredNorm() - 0.5) < 1e-15);
}

TEST_CASE("creation then annihilation scales by occupation plus one") {
  for (int n_h = 0; n_h <= 3; ++n_h)
    for (int n_v = 0; n_v <= 3; ++n_v)
      for (Mode mode : {Mode::h, Mode::v}) {
        const auto state = basis_state(8, {n_h, n_v});
        const auto back = apply_annihilation(apply_creation(state, mode), mode);
        const int occ = (mode == Mode::h) ? n_h : n_v;
        CHECK(std::abs(back.amplitude({n_h, n_v}) - (occ + 1.0)) < 1e-12);
      }
  CHECK_THROWS_AS(apply_creation(basis_state(2, {1, 1}), Mode::h), std::domain_error);
}

TEST_CASE("photon-number projection of the downconversion state") {
  const double r = 0.5;
  const auto pdc = pdc_state(r, 8);
  for (int pairs : {1, 3}) {
    const auto projection = project_total_photon_number(pdc, 2 * pairs);
    const double expected =
        std::pow(std::tanh(r), 2 * pairs) / (std::cosh(r) * std::cosh(r));
    CHECK(std::abs(projection.probability - expected) < 1e-15);
    REQUIRE(projection.state.has_value());
    CHECK(std::abs(projection.state->amplitude({pairs, pairs}) - 1.0) < 1e-12);
  }
  const auto odd = project_total_photon_number(pdc, 3);
  CHECK(odd.probability == 0.0);
  CHECK_FALSE(odd.state.has_value());

  const auto eigen = project_total_photon_number(basis_state(4, {2, 2}), 4);
  CHECK(eigen.probability == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(project_total_photon_number(pdc, 9), std::invalid_argument);
}

TEST_CASE("projection probabilities are complete") {
  std::mt19937 rng(20260823);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    PolarizationState state(6);
    for (int i = 0; i < state.amps.size(); ++i) state.amps[i] = complex(gauss(rng), gauss(rng));
    state = normalized(state);
    double total = 0.0;
    for (int n = 0; n <= 6; ++n) total += project_total_photon_number(state, n).probability;
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("beam splitter on vacuum and one photon") {
  FourModeState vacuum(0);
  vacuum.amps[0] = 1.0;
  const auto still_vacuum = beam_splitter_unitary(vacuum, 0.5);
  CHECK(std::abs(still_vacuum.amplitude({0, 0, 0, 0}) - 1.0) < 1e-15);

  const auto split = beam_splitter_unitary(embed_with_transmitted_vacuum(basis_state(1, {1, 0})), 0.5);
  CHECK(std::abs(split.amplitude({1, 0, 0, 0}) - std::sqrt(0.5)) < 1e-12);
  CHECK(std::abs(std::abs(split.amplitude({0, 0, 1, 0})) - std::sqrt(0.5)) < 1e-12);
}

TEST_CASE("beam splitter one-transmitted amplitude at R=5/6") {
  const double r = 5.0 / 6.0;
  const auto split = beam_splitter_unitary(embed_with_transmitted_vacuum(basis_state(6, {3, 3})), r);
  const double expected = std::sqrt(3.0 * (1.0 - r) * std::pow(r, 5));
  CHECK(std::abs(split.amplitude({3, 2, 0, 1}) - expected) < 1e-12);
  CHECK(std::abs(split.amplitude({2, 3, 1, 0}) - expected) < 1e-12);
}

TEST_CASE("beam splitter domain") {
  FourModeState vacuum(0);
  vacuum.amps[0] = 1.0;
  CHECK_THROWS_AS(beam_splitter_unitary(vacuum, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(beam_splitter_unitary(vacuum, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(beam_splitter_unitary(vacuum, 1.2), std::invalid_argument);
}

TEST_CASE("beam splitter is unitary and photon-number conserving") {
  std::mt19937 rng(7041);
  std::uniform_int_distribution<int> photons(0, 8);
  std::uniform_real_distribution<double> reflectivity(0.05, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = photons(rng);
    const auto input = random_four_mode_state(rng, 8, n);
    const auto output = beam_splitter_unitary(input, reflectivity(rng));
    CHECK(std::abs(output.norm() - 1.0) < 1e-10);
    const auto& labels = four_mode_labels(8);
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i].total() != n) CHECK(output.amps[i] == complex(0.0));
  }
}

TEST_CASE("partial trace over the transmitted modes") {
  std::mt19937 rng(99);
  const auto psi = random_fixed_n_state(rng, 3, 2);
  const auto product = embed_with_transmitted_vacuum(psi);
  const auto rho = partial_trace_transmitted(product);
  const auto pure = DensityMatrix::from_pure(psi);
  CHECK((rho.m - pure.m).cwiseAbs().maxCoeff() < 1e-14);

  // one photon split evenly between reflected and transmitted H
  FourModeState bell(1);
  bell.amps[four_mode_index(1, {1, 0, 0, 0})] = 1.0 / std::sqrt(2.0);
  bell.amps[four_mode_index(1, {0, 0, 1, 0})] = 1.0 / std::sqrt(2.0);
  const auto mixed = partial_trace_transmitted(bell);
  CHECK(std::abs(mixed.trace_real() - 1.0) < 1e-12);
  CHECK(std::abs(mixed.m(basis_index({1, 0}), basis_index({1, 0})).real() - 0.5) < 1e-12);
  CHECK(std::abs(mixed.m(basis_index({0, 0}), basis_index({0, 0})).real() - 0.5) < 1e-12);
  CHECK(std::abs(mixed.m(basis_index({1, 0}), basis_index({0, 0}))) < 1e-14);

  const auto split = beam_splitter_unitary(embed_with_transmitted_vacuum(basis_state(2, {1, 1})), 0.5);
  const auto reduced = partial_trace_transmitted(split);
  CHECK(std::abs(reduced.trace_real() - 1.0) < 1e-12);
  CHECK(reduced.hermiticity_deviation() < 1e-12);
  CHECK(reduced.min_eigenvalue() > -1e-10);
}

TEST_CASE("density matrix support detection") {
  const auto rho = DensityMatrix::from_pure(wedge_state(2));
  CHECK(rho.support_photon_number() == 3);
  DensityMatrix blend(3);
  blend.m(basis_index({0, 0}), basis_index({0, 0})) = 0.5;
  blend.m(basis_index({1, 0}), basis_index({1, 0})) = 0.5;
  CHECK_FALSE(blend.support_photon_number().has_value());
}

TEST_CASE("zero-norm and truncation guards") {
  CHECK_THROWS_AS(normalized(PolarizationState(2)), std::domain_error);
  PolarizationState tiny(2);
  tiny.amps[0] = 1e-15;
  CHECK_THROWS_AS(normalized(tiny), std::domain_error);

  const auto wedge = wedge_state(2);  // three photons
  CHECK_THROWS_AS(with_truncation(wedge, 2), std::invalid_argument);
  const auto widened = with_truncation(wedge, 5);
  CHECK(widened.n_max == 5);
  CHECK(std::abs(widened.amplitude({2, 1}) - wedge.amplitude({2, 1})) == 0.0);
  const auto narrowed = with_truncation(widened, 3);
  CHECK(narrowed.amps.size() == wedge.amps.size());
}

TEST_CASE("pair rotation matrices are unitary and compose") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
  const auto random_su2 = [&rng, &angle]() {
    const double theta = 0.5 * angle(rng);
    const complex a = std::exp(complex(0.0, angle(rng))) * std::cos(theta);
    const complex b = std::exp(complex(0.0, angle(rng))) * std::sin(theta);
    Eigen::Matrix2cd u;
    u << a, -std::conj(b),  //
        b, std::conj(a);
    return u;
  };
  for (int n : {1, 3, 8}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::Matrix2cd u1 = random_su2();
      const Eigen::Matrix2cd u2 = random_su2();
      const Eigen::MatrixXcd m1 = pair_rotation_matrix(n, u1);
      CHECK((m1.adjoint() * m1 - Eigen::MatrixXcd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() <
            1e-12);
      const Eigen::MatrixXcd composed = pair_rotation_matrix(n, u2 * u1);
      CHECK((pair_rotation_matrix(n, u2) * m1 - composed).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}
