#include "doctest.h"

#include "scamp/errors.hpp"
#include "scamp/fock.hpp"
#include "scamp/states.hpp"

#include <cmath>

using namespace scamp;
using namespace scamp::fock;

namespace {

double binom(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }
double fact(int n) { return std::tgamma(n + 1.0); }

// |n1, n2> under a^dag -> t a^dag + r b^dag, b^dag -> t b^dag - r a^dag, by
// expanding both binomials term by term.
Eigen::MatrixXd binomial_beamsplitter(int n1, int n2, double t, double r, int dim) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  const double pre = 1.0 / std::sqrt(fact(n1) * fact(n2));
  for (int j = 0; j <= n1; ++j) {
    for (int k = 0; k <= n2; ++k) {
      const int pa = j + (n2 - k);
      const int pb = (n1 - j) + k;
      const double c = binom(n1, j) * std::pow(t, j) * std::pow(r, n1 - j) * binom(n2, k) *
                       std::pow(t, k) * std::pow(-r, n2 - k);
      out(pa, pb) += pre * c * std::sqrt(fact(pa) * fact(pb));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("block beamsplitter matches the binomial expansion") {
  const int dim = 12;
  for (const double t : {std::sqrt(0.5), std::sqrt(0.95), 0.3}) {
    const double r = std::sqrt(1.0 - t * t);
    const BeamSplitterFock bs(t, r, dim);
    for (int n1 = 0; n1 < 6; ++n1) {
      for (int n2 = 0; n2 < 6; ++n2) {
        Eigen::MatrixXcd in = Eigen::MatrixXcd::Zero(dim, dim);
        in(n1, n2) = 1.0;
        const auto out = bs.apply(TwoModeFock(in));
        const Eigen::MatrixXd expected = binomial_beamsplitter(n1, n2, t, r, dim);
        CHECK((out.amps() - expected.cast<Complex>()).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("beamsplitter blocks are orthogonal and preserve norm") {
  const BeamSplitterFock bs(std::sqrt(0.95), std::sqrt(0.05), 40);
  for (int n = 0; n < 40; ++n) {
    const auto& u = bs.block(n);
    CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-12);
  }
  const auto product = TwoModeFock::product(states::cat_fock(states::CatSpec(1.0, Parity::odd)),
                                            states::squeezed_vacuum_fock(-0.7));
  CHECK(std::abs(bs.apply(product).norm() - product.norm()) < 1e-10);
}

TEST_CASE("coherent inputs follow the pinned convention") {
  const int dim = 40;
  const Complex a(0.8, 0.1), b(-0.5, 0.3);
  const double t = std::sqrt(0.5), r = std::sqrt(0.5);
  const auto out = beamsplitter_fock(
      TwoModeFock::product(states::coherent_fock(a, dim), states::coherent_fock(b, dim)), t, r);
  const auto expected = TwoModeFock::product(states::coherent_fock(t * a - r * b, dim),
                                             states::coherent_fock(t * b + r * a, dim));
  CHECK((out.amps() - expected.amps()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("components beyond the total photon cutoff are dropped") {
  Eigen::MatrixXcd in = Eigen::MatrixXcd::Zero(4, 4);
  in(3, 3) = 1.0;
  const auto out = BeamSplitterFock(std::sqrt(0.5), std::sqrt(0.5), 4).apply(TwoModeFock(in));
  CHECK(out.norm() == doctest::Approx(0.0));
  CHECK(TwoModeFock(in).mass_at_or_above_total(4) == doctest::Approx(1.0));
}

TEST_CASE("squeezed vacuum by matrix exponential matches the closed form") {
  for (const double s : {-1.0, -0.7218, 0.4}) {
    const auto closed = states::squeezed_vacuum_fock(s, 100);
    // The error of the cropped exponential sits at the top of the kept space
    // and shrinks quickly with the padding.
    const auto expm = squeeze_fock(FockVector::basis(0, 100), s);
    CHECK((expm.amps() - closed.amps()).cwiseAbs().maxCoeff() < 1e-9);
    const auto padded = squeeze_fock(FockVector::basis(0, 100), s, 40);
    CHECK((padded.amps() - closed.amps()).cwiseAbs().maxCoeff() < 1e-12);
    // sqrt(sech s) sqrt((2m)!)/m! (-tanh(s)/2)^m for m = 1, 2
    const double c0 = std::sqrt(1.0 / std::cosh(s));
    CHECK(closed[2].real() == doctest::Approx(c0 * std::sqrt(2.0) * (-std::tanh(s) / 2)).epsilon(1e-12));
    CHECK(closed[4].real() ==
          doctest::Approx(c0 * std::sqrt(24.0) / 2.0 * std::pow(-std::tanh(s) / 2, 2)).epsilon(1e-12));
    CHECK(closed[1] == Complex(0.0));
  }
}

TEST_CASE("squeeze_fock guards") {
  const auto v = states::coherent_fock(0.5, 20);
  CHECK((squeeze_fock(v, 0.0).amps() - v.amps()).norm() == 0.0);
  CHECK_THROWS_AS(squeeze_fock(v, 2.5), DomainError);
  CHECK_THROWS_AS(squeeze_fock(states::cat_fock(states::CatSpec(1.0, Parity::even), 20), -1.4), TruncationError);
  try {
    squeeze_fock(states::cat_fock(states::CatSpec(1.0, Parity::even), 20), -1.4);
  } catch (const TruncationError& e) {
    CHECK(e.suggested_dim() == 40);
  }
  CHECK(std::abs(squeeze_fock(states::cat_fock(states::CatSpec(1.0, Parity::even), 200), -1.2).norm() - 1.0) < 1e-10);
}

TEST_CASE("ladder operators") {
  const auto a = ladder(FockVector::basis(3, 6), Ladder::annihilate);
  CHECK(a.norm == doctest::Approx(std::sqrt(3.0)));
  CHECK(a.vector[2].real() == doctest::Approx(std::sqrt(3.0)));
  const auto c = ladder(FockVector::basis(5, 6), Ladder::create);
  CHECK(c.vector.dim() == 7);
  CHECK(c.vector[6].real() == doctest::Approx(std::sqrt(6.0)));
  CHECK(ladder(FockVector::basis(0, 6), Ladder::annihilate).norm == 0.0);
}

TEST_CASE("geiger detection") {
  const auto one = TwoModeFock::product(FockVector::basis(0, 4), FockVector::basis(1, 4));
  CHECK(condition_fock(one, 1, 0.7, Outcome::click).probability == doctest::Approx(0.7));
  const auto three = TwoModeFock::product(FockVector::basis(3, 5), FockVector::basis(0, 5));
  CHECK(condition_fock(three, 0, 0.4, Outcome::no_click).probability == doctest::Approx(std::pow(0.6, 3)));
  const auto vac = TwoModeFock::product(FockVector::basis(0, 4), FockVector::basis(0, 4));
  CHECK_THROWS_AS(condition_fock(vac, 1, 1.0, Outcome::click), NegligibleEventError);

  // Coherent light: no-click probability exp(-eta |alpha|^2).
  const auto coh = TwoModeFock::product(states::coherent_fock(1.2, 40), FockVector::basis(0, 40));
  CHECK(condition_fock(coh, 0, 0.8, Outcome::no_click).probability ==
        doctest::Approx(std::exp(-0.8 * 1.44)).epsilon(1e-12));
}

TEST_CASE("mixture conditioning and decomposition") {
  const auto coh = TwoModeFock::product(states::coherent_fock(1.0, 30), states::coherent_fock(0.5, 30));
  const auto mixed = condition_fock(coh, 0, 0.6, Outcome::click).state;
  const auto parts = decompose(mixed);
  Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(mixed.dim(), mixed.dim());
  for (const auto& [w, v] : parts) rebuilt += w * v.amps() * v.amps().adjoint();
  CHECK((rebuilt - mixed.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(mixed.trace() == doctest::Approx(1.0));
  CHECK(mixed.hermiticity_error() < 1e-14);
  CHECK(mixed.min_eigenvalue() > -1e-14);
}

TEST_CASE("fidelity basics") {
  const auto even = states::cat_fock(states::CatSpec(1.0, Parity::even));
  const auto odd = states::cat_fock(states::CatSpec(1.0, Parity::odd));
  CHECK(fidelity_fock(even, FockDensity::pure(even)) == doctest::Approx(1.0));
  CHECK(fidelity_fock(even, FockDensity::pure(odd)) == doctest::Approx(0.0));
  CHECK(FockDensity::pure(odd).parity_population(Parity::odd) == doctest::Approx(1.0));
}

TEST_CASE("characteristic function from the number basis") {
  const Complex xi(0.4, -0.3);
  CHECK(std::abs(chi_from_fock(FockVector::basis(0, 30), xi).value - std::exp(-0.5 * std::norm(xi))) < 1e-12);
  const Complex a(0.7, 0.2);
  const Complex expected = std::exp(xi * std::conj(a) - std::conj(xi) * a - 0.5 * std::norm(xi));
  CHECK(std::abs(chi_from_fock(states::coherent_fock(a, 40), xi).value - expected) < 1e-10);
  CHECK_FALSE(chi_from_fock(FockVector::basis(0, 40), Complex(3.0, 0.0)).truncation_warning);
  CHECK(chi_from_fock(FockVector::basis(0, 40), Complex(3.3, 0.0)).truncation_warning);
}

TEST_CASE("displacement of vacuum is a coherent state") {
  const Complex a(0.9, -0.4);
  const Eigen::VectorXcd v = displacement_matrix(a, 40) * FockVector::basis(0, 40).amps();
  CHECK((v - states::coherent_fock(a, 40).amps()).cwiseAbs().maxCoeff() < 1e-10);
}
