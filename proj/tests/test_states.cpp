#include "doctest.h"

#include "scamp/errors.hpp"
#include "scamp/states.hpp"

#include <cmath>
#include <random>

using namespace scamp;
using namespace scamp::states;

namespace {

double max_chi_gap(const phase_space::GaussianSumState& chi, const fock::FockVector& v, int probes) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const auto rho = fock::FockDensity::pure(v);
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    const Complex xi(u(rng), u(rng));
    worst = std::max(worst, std::abs(chi.chi(std::span<const Complex>(&xi, 1)) - fock::chi_from_fock(rho, xi).value));
  }
  return worst;
}

}  // namespace

TEST_CASE("cat specification") {
  CHECK_THROWS_AS(CatSpec(0.0, Parity::odd), DomainError);
  CHECK_THROWS_AS(CatSpec(-0.5, Parity::even), DomainError);
  CHECK(CatSpec(0.0, Parity::even).norm_sq() == doctest::Approx(0.25));
  CHECK(CatSpec(1.0, Parity::odd).norm_sq() == doctest::Approx(1.0 / (2.0 - 2.0 * std::exp(-2.0))).epsilon(1e-14));
}

TEST_CASE("number-basis cats") {
  const double a = 1.0;
  const auto even = cat_fock(CatSpec(a, Parity::even));
  // a^{2n} / sqrt((2n)!) / sqrt(cosh a^2)
  for (int n = 0; n < 6; ++n) {
    const double expected = std::pow(a, 2 * n) / std::sqrt(std::tgamma(2 * n + 1.0)) / std::sqrt(std::cosh(a * a));
    CHECK(even[2 * n].real() == doctest::Approx(expected).epsilon(1e-13));
    CHECK(even[2 * n + 1] == Complex(0.0));
  }
  const auto odd = cat_fock(CatSpec(1.3, Parity::odd));
  for (int n = 0; n < 20; n += 2) CHECK(odd[n] == Complex(0.0));
  CHECK(odd.norm() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("characteristic functions agree with the number basis") {
  const auto chi = cat_chi(CatSpec(1.0, Parity::odd));
  CHECK(chi.terms().size() == 4);
  CHECK(max_chi_gap(chi, cat_fock(CatSpec(1.0, Parity::odd)), 20) < 1e-8);
  CHECK(max_chi_gap(cat_chi(CatSpec(1.4, Parity::even)), cat_fock(CatSpec(1.4, Parity::even)), 20) < 1e-8);
  CHECK(max_chi_gap(squeezed_vacuum_chi(-0.9), squeezed_vacuum_fock(-0.9, 100), 20) < 1e-8);
  // The y coordinate enters the linear term through both Re and Im of alpha.
  const Complex a(0.6, -0.35);
  CHECK(max_chi_gap(squeezed_coherent_chi(-0.5, a), squeezed_coherent_fock(-0.5, a, 60), 20) < 1e-8);
  CHECK(max_chi_gap(squeezed_cat_chi(-0.7, CatSpec(1.0, Parity::even)),
                    fock::squeeze_fock(cat_fock(CatSpec(1.0, Parity::even), 80), -0.7), 20) < 1e-8);
}

TEST_CASE("make_state guardrails") {
  StateParams p;
  p.alpha = 2.5;
  CHECK_THROWS_AS(make_state(StateKind::coherent, p, Representation::chi), DomainError);
  p.guard.max_alpha = 3.0;
  CHECK_NOTHROW(make_state(StateKind::coherent, p, Representation::chi));
  p = {};
  p.s = -1.6;
  CHECK_THROWS_AS(make_state(StateKind::squeezed_vacuum, p, Representation::fock), DomainError);
  p = {};
  p.alpha = 0.0;
  p.parity = Parity::odd;
  CHECK_THROWS_AS(make_state(StateKind::cat, p, Representation::fock), DomainError);
  p.alpha = 1.0;
  const auto s = make_state(StateKind::cat, p, Representation::chi);
  CHECK(std::get<phase_space::GaussianSumState>(s).terms().size() == 4);
}

TEST_CASE("squeezing conventions") {
  CHECK(SqueezeSpec{0.0}.decibels() == 0.0);
  CHECK(SqueezeSpec{-0.5}.decibels() == doctest::Approx(10.0 / std::log(10.0)).epsilon(1e-12));
  CHECK(optimal_squeezing(0.0).s == 0.0);
  CHECK(optimal_squeezing(1.0).s == doctest::Approx(-0.7218).epsilon(1e-4));
  CHECK(optimal_squeezing(1.0).decibels() == doctest::Approx(6.3).epsilon(0.1 / 6.3));
  CHECK(optimal_squeezing(2.0).s == doctest::Approx(-1.388).epsilon(1e-3));
  CHECK(optimal_squeezing(2.0).decibels() == doctest::Approx(12.1).epsilon(0.2 / 12.1));
}

TEST_CASE("cat and squeezed vacuum overlap") {
  CHECK(cat_squeezed_overlap(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(cat_squeezed_overlap(1.2, 0.0) == doctest::Approx(1.0 / std::cosh(1.44)));
  const double v = cat_squeezed_overlap(1.0, -0.7218);
  CHECK(std::abs(v - 0.945) < 0.005);
  const double direct = fock::overlap(cat_fock(CatSpec(1.0, Parity::even), 80), squeezed_vacuum_fock(-0.7218, 80));
  CHECK(v == doctest::Approx(direct).epsilon(1e-12));
  // optimal_squeezing is a stationary point
  for (const double a : {0.5, 1.0, 1.5}) {
    const double s = optimal_squeezing(a).s;
    CHECK(cat_squeezed_overlap(a, s) > cat_squeezed_overlap(a, s + 1e-3));
    CHECK(cat_squeezed_overlap(a, s) > cat_squeezed_overlap(a, s - 1e-3));
  }
}

TEST_CASE("comparison channel limits") {
  const auto one = comparison_channel_params(0.9, -0.6, 1.0);
  CHECK(one.s_prime == doctest::Approx(0.0));
  CHECK(one.alpha_prime == doctest::Approx(0.9));
  const auto zero = comparison_channel_params(0.9, -0.6, 0.0);
  CHECK(zero.s_prime == doctest::Approx(-0.6));
  CHECK(zero.alpha_prime == doctest::Approx(0.0));
  CHECK_FALSE(one.noclick_reliable);
  CHECK_THROWS_AS(comparison_channel_params(1.0, -0.5, 1.2), DomainError);
}

TEST_CASE("comparison channel reproduces the conditioned output") {
  const double a = 1.0, s = optimal_squeezing(1.0).s, r1 = std::sqrt(0.5);
  const auto mixed = phase_space::substitute_beamsplitter(
      phase_space::tensor(coherent_chi(a), squeezed_vacuum_chi(s)), 0, 1, r1, r1);
  const auto out = phase_space::condition(mixed, 0, phase_space::DetectorPovm(1.0, Outcome::no_click)).state;
  const auto p = comparison_channel_params(a, s, r1);
  CHECK(phase_space::overlap(squeezed_coherent_chi(p.s_prime, p.alpha_prime), out) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p.s_prime == doctest::Approx(-0.319458259481).epsilon(1e-10));
  CHECK(p.alpha_prime == doctest::Approx(0.743496068920).epsilon(1e-10));
}

TEST_CASE("photon subtraction") {
  // Without squeezing, subtracting a photon from an even cat gives the odd cat exactly.
  CHECK(subtracted_squeezed_cat_overlap(1.1, Parity::even, 0.0, 1.1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(subtracted_squeezed_cat_overlap(0.7, Parity::odd, 0.0, 0.7) == doctest::Approx(1.0).epsilon(1e-12));
  const auto v = subtracted_squeezed_cat(1.0, Parity::even, -0.3);
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK(std::abs(v[0]) == 0.0);
  CHECK_THROWS_AS(subtracted_squeezed_cat_overlap(1.0, Parity::even, -0.3, 0.0), DomainError);
}
