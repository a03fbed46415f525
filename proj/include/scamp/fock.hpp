#pragma once

// Truncated photon-number-basis engine. Everything here is dense and exact up
// to the truncation; it is the independent oracle for the phase-space engine.

#include "scamp/common.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace scamp::fock {

inline constexpr int kDefaultDim = 40;
inline constexpr int kDefaultPad = 20;

class FockVector {
 public:
  explicit FockVector(Eigen::VectorXcd amps);
  static FockVector basis(int n, int dim);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Eigen::VectorXcd& amps() const { return amps_; }
  Complex operator[](int n) const { return amps_(n); }

  double norm() const { return amps_.norm(); }
  FockVector normalized() const;
  /// Population of the top `count` number states.
  double tail_mass(int count = 5) const;
  /// Zero-pads or crops to `dim` number states.
  FockVector resized(int dim) const;

 private:
  Eigen::VectorXcd amps_;
};

/// |<a|b>|^2 for (not necessarily equal-length) vectors.
double overlap(const FockVector& a, const FockVector& b);

class FockDensity {
 public:
  explicit FockDensity(Eigen::MatrixXcd matrix);
  static FockDensity pure(const FockVector& v);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  double trace() const { return matrix_.trace().real(); }
  double purity() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  /// Population in the even or odd photon-number sector.
  double parity_population(Parity parity) const;
  /// Population of the top `count` number states.
  double tail_mass(int count = 5) const;

 private:
  Eigen::MatrixXcd matrix_;
};

/// Pure two-mode state, amps(n1, n2) over |n1, n2> with n1, n2 < dim.
class TwoModeFock {
 public:
  explicit TwoModeFock(Eigen::MatrixXcd amps);
  static TwoModeFock product(const FockVector& a, const FockVector& b);

  int dim1() const { return static_cast<int>(amps_.rows()); }
  int dim2() const { return static_cast<int>(amps_.cols()); }
  const Eigen::MatrixXcd& amps() const { return amps_; }
  double norm() const { return amps_.norm(); }
  /// Population with n1 + n2 >= total.
  double mass_at_or_above_total(int total) const;

 private:
  Eigen::MatrixXcd amps_;
};

/// Two-mode beamsplitter exp(theta (a b^dag - a^dag b)), theta = atan2(r, t),
/// applied block by block on fixed total photon number. With this sign
/// a^dag -> t a^dag + r b^dag, so |alpha, beta> -> |t alpha - r beta, t beta + r alpha>.
/// Components with n1 + n2 >= dim are outside the truncated space and dropped.
class BeamSplitterFock {
 public:
  BeamSplitterFock(double t, double r, int dim);

  int dim() const { return dim_; }
  double t() const { return t_; }
  double r() const { return r_; }
  /// Unitary on the total-photon-number block n, basis |k, n - k>, k = 0..n.
  const Eigen::MatrixXd& block(int n) const { return blocks_.at(n); }

  TwoModeFock apply(const TwoModeFock& state) const;

 private:
  double t_, r_;
  int dim_;
  std::vector<Eigen::MatrixXd> blocks_;
};

TwoModeFock beamsplitter_fock(const TwoModeFock& state, double t, double r);

/// S(s) = exp(s/2 (a^2 - a^dag^2)) built at dim + pad and cropped. With this
/// sign S(s)|0> has amplitudes sqrt(sech s) sqrt((2m)!)/m! (-tanh(s)/2)^m.
/// Throws TruncationError when the result has tail mass above `tail_tolerance`.
FockVector squeeze_fock(const FockVector& state, double s, int pad = kDefaultPad,
                        double tail_tolerance = 1e-10);

enum class Ladder { annihilate, create };

struct LadderResult {
  FockVector vector;  // unnormalized
  double norm;
};

/// a or a^dag. Creation grows the dimension by one so no amplitude is lost.
LadderResult ladder(const FockVector& state, Ladder which);

struct FockConditioned {
  FockDensity state;
  double probability;
};

struct WeightedTwoMode {
  double weight;
  TwoModeFock state;
};

/// Geiger-mode detection on `mode` (0 or 1) with no-click element
/// diag((1 - eta)^n), followed by the partial trace over that mode.
FockConditioned condition_fock(const TwoModeFock& state, int mode, double efficiency,
                               Outcome outcome, double floor = 1e-12);
/// Same for a mixture given as a weighted ensemble of pure states.
FockConditioned condition_fock(std::span<const WeightedTwoMode> ensemble, int mode,
                               double efficiency, Outcome outcome, double floor = 1e-12);

/// Eigen-decomposition of a density matrix into weighted pure states,
/// dropping weights at or below `cutoff`.
std::vector<std::pair<double, FockVector>> decompose(const FockDensity& rho,
                                                     double cutoff = 1e-16);

/// <psi|rho|psi>.
double fidelity_fock(const FockVector& pure, const FockDensity& rho);

Eigen::MatrixXd annihilation_matrix(int dim);
/// D(xi) = exp(xi a^dag - xi* a), exponentiated at dim + pad and cropped.
Eigen::MatrixXcd displacement_matrix(Complex xi, int dim, int pad = kDefaultPad);

struct ChiProbe {
  Complex value;
  bool truncation_warning;  // |xi| > sqrt(dim)/2
};

ChiProbe chi_from_fock(const FockDensity& rho, Complex xi, int pad = kDefaultPad);
ChiProbe chi_from_fock(const FockVector& state, Complex xi, int pad = kDefaultPad);
/// Tr[|psi><psi| D(xi1) (x) D(xi2)].
ChiProbe chi_from_fock(const TwoModeFock& state, Complex xi1, Complex xi2,
                       int pad = kDefaultPad);

}  // namespace scamp::fock
