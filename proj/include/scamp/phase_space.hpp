#pragma once

// Characteristic-function calculus for n-mode states written as finite sums
// of Gaussian terms
//
//     chi(r) = sum_k c_k exp(-1/2 r^T M_k r + l_k^T r),
//
// with r = (x_1, y_1, ..., x_n, y_n) and xi_j = x_j + i y_j the argument of
// the symmetrically ordered characteristic function Tr[rho D(xi)].

#include "scamp/common.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace scamp::phase_space {

using scamp::Complex;
using scamp::Outcome;

class GaussianTerm {
 public:
  /// M is symmetrized on construction. Sizes must be 2n x 2n and 2n.
  GaussianTerm(Complex weight, Eigen::MatrixXd quad, Eigen::VectorXcd lin);

  int modes() const { return static_cast<int>(lin_.size() / 2); }
  Complex weight() const { return weight_; }
  const Eigen::MatrixXd& quad() const { return quad_; }
  const Eigen::VectorXcd& lin() const { return lin_; }

  Complex evaluate(const Eigen::VectorXd& r) const;

  GaussianTerm scaled(Complex factor) const;
  /// The term evaluated at -r.
  GaussianTerm reflected() const;

 private:
  Complex weight_;
  Eigen::MatrixXd quad_;
  Eigen::VectorXcd lin_;
};

class GaussianSumState {
 public:
  GaussianSumState(int modes, std::vector<GaussianTerm> terms, std::string label = {});

  int modes() const { return modes_; }
  const std::vector<GaussianTerm>& terms() const { return terms_; }
  const std::string& label() const { return label_; }

  /// chi at complex arguments, one per mode.
  Complex chi(std::span<const Complex> xi) const;
  Complex chi(const Eigen::VectorXd& r) const;
  /// chi(0), the trace of the represented operator.
  Complex trace() const;

  GaussianSumState scaled(Complex factor) const;
  GaussianSumState relabeled(std::string label) const;

 private:
  int modes_;
  std::vector<GaussianTerm> terms_;
  std::string label_;
};

/// Packs complex phase-space arguments into real coordinates (x1, y1, x2, ...).
Eigen::VectorXd pack(std::span<const Complex> xi);

/// Geiger-mode detector without dark counts. The no-click element has
/// chi(xi) = (1/eta) exp(-(2 - eta)/(2 eta) |xi|^2); the click element is
/// pi delta^2(xi) minus that, with the delta applied as an argument
/// restriction.
struct DetectorPovm {
  double efficiency = 1.0;
  Outcome outcome = Outcome::no_click;

  DetectorPovm(double efficiency, Outcome outcome);
  /// Single-mode Gaussian term of the no-click element.
  GaussianTerm no_click_term() const;
  bool has_delta() const { return outcome == Outcome::click; }
};

struct Tolerances {
  double normalization = 1e-10;
  double hermiticity = 1e-10;
  double purity_excess = 1e-9;
  double unitarity = 1e-12;
  double probability_floor = 1e-12;
  int hermiticity_probes = 100;
};

GaussianSumState tensor(const GaussianSumState& a, const GaussianSumState& b);

/// chi_out(xi) = chi_in(L xi) with (xi_i, xi_j) -> (t xi_i + r xi_j, t xi_j - r xi_i).
/// On coherent inputs this maps |a, b> to |t a - r b, t b + r a>.
GaussianSumState substitute_beamsplitter(const GaussianSumState& state, int mode_i, int mode_j,
                                         double t, double r,
                                         const Tolerances& tol = {});

/// Tr[A B] = int d^{2n}xi / pi^n chi_A(xi) chi_B(-xi).
Complex trace_product(const GaussianSumState& a, const GaussianSumState& b);
/// Real part of trace_product; the fidelity when one argument is pure.
double overlap(const GaussianSumState& a, const GaussianSumState& b);
double purity(const GaussianSumState& state);

struct Conditioned {
  GaussianSumState state;
  double probability;
};

/// Outcome probability of a detector on one mode. Works for any mode count.
double detection_probability(const GaussianSumState& state, int mode, const DetectorPovm& povm);

/// Postselects the outcome on `mode` and returns the normalized state of the
/// remaining modes. Requires at least two modes.
Conditioned condition(const GaussianSumState& state, int mode, const DetectorPovm& povm,
                      const Tolerances& tol = {});

/// Rectangular lattice of quadrature points, q = sqrt(2) Re(beta),
/// p = sqrt(2) Im(beta), so the vacuum has unit-free variance 1/2.
struct QuadratureGrid {
  double q_min = -6.0, q_max = 6.0;
  double p_min = -6.0, p_max = 6.0;
  double step = 0.05;

  std::vector<double> q_points() const;
  std::vector<double> p_points() const;
};

struct WignerField {
  std::vector<double> q;
  std::vector<double> p;
  Eigen::MatrixXd values;  // values(iq, ip)

  double minimum() const;
  /// Trapezoidal integral over the lattice.
  double integral() const;
};

/// Wigner function normalized to int W dq dp = 1 (vacuum: W(0, 0) = 1/pi).
double wigner_at(const GaussianSumState& state, double q, double p);
WignerField wigner(const GaussianSumState& state, const QuadratureGrid& grid);

struct Check {
  std::string name;
  bool passed;
  double value;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool all_passed() const;
  const Check* find(const std::string& name) const;
};

/// Normalization, hermiticity and purity checks. POVM elements are exempt
/// from normalization and purity.
ValidationReport validate(const GaussianSumState& state, bool is_state = true,
                          const Tolerances& tol = {});

}  // namespace scamp::phase_space
