#include "scamp/phase_space.hpp"

#include "scamp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace scamp::phase_space {

namespace {

constexpr double kPi = std::numbers::pi;

// int exp(-1/2 r^T M r + l^T r) d^{dim} r for real symmetric positive definite M.
struct GaussianIntegral {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double sqrt_det = 1.0;

  explicit GaussianIntegral(const Eigen::MatrixXd& m) : llt(m) {
    if (llt.info() != Eigen::Success) {
      throw DomainError("Gaussian integral diverges: quadratic form is not positive definite");
    }
    const Eigen::MatrixXd& lower = llt.matrixLLT();
    for (Eigen::Index i = 0; i < lower.rows(); ++i) sqrt_det *= lower(i, i);
  }

  Complex quadratic(const Eigen::VectorXcd& l) const {
    const Eigen::VectorXcd solved = llt.solve(l);
    return 0.5 * (l.transpose() * solved)(0, 0);
  }

  Complex value(const Eigen::VectorXcd& l) const {
    const double dim = static_cast<double>(llt.matrixLLT().rows());
    return std::pow(2.0 * kPi, dim / 2.0) / sqrt_det * std::exp(quadratic(l));
  }
};

std::vector<int> coordinate_indices(int modes, int skip_mode) {
  std::vector<int> idx;
  for (int m = 0; m < modes; ++m) {
    if (m == skip_mode) continue;
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  return idx;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

Eigen::VectorXcd subvector(const Eigen::VectorXcd& v, const std::vector<int>& idx) {
  Eigen::VectorXcd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

void check_mode(const GaussianSumState& state, int mode) {
  if (mode < 0 || mode >= state.modes()) {
    std::ostringstream os;
    os << "mode " << mode << " out of range for a " << state.modes() << "-mode state";
    throw DomainError(os.str());
  }
}

// Traces out `mode` against the no-click element without normalizing:
// (1/pi) int d^2 xi_m chi(xi_rest, xi_m) chi_noclick(-xi_m).
std::vector<GaussianTerm> integrate_no_click(const GaussianSumState& state, int mode,
                                             double efficiency) {
  const double kappa = (2.0 - efficiency) / efficiency;
  const auto keep = coordinate_indices(state.modes(), mode);
  const std::vector<int> measured{2 * mode, 2 * mode + 1};

  std::vector<GaussianTerm> out;
  out.reserve(state.terms().size());
  for (const auto& term : state.terms()) {
    const Eigen::MatrixXd a = submatrix(term.quad(), keep, keep);
    const Eigen::MatrixXd b = submatrix(term.quad(), keep, measured);
    Eigen::MatrixXd c = submatrix(term.quad(), measured, measured);
    c.diagonal().array() += kappa;
    const Eigen::VectorXcd lu = subvector(term.lin(), keep);
    const Eigen::VectorXcd lw = subvector(term.lin(), measured);

    const GaussianIntegral integral(c);
    const Eigen::MatrixXd c_inv_bt = integral.llt.solve(b.transpose());
    const Eigen::VectorXcd c_inv_lw = integral.llt.solve(lw);

    const Eigen::MatrixXd quad = a - b * c_inv_bt;
    const Eigen::VectorXcd lin = lu - b.cast<Complex>() * c_inv_lw;
    const Complex weight = term.weight() / efficiency / kPi * integral.value(lw);
    out.emplace_back(weight, quad, lin);
  }
  return out;
}

// chi(xi_rest, 0): the delta part of the click element.
std::vector<GaussianTerm> restrict_to_origin(const GaussianSumState& state, int mode) {
  const auto keep = coordinate_indices(state.modes(), mode);
  std::vector<GaussianTerm> out;
  out.reserve(state.terms().size());
  for (const auto& term : state.terms()) {
    out.emplace_back(term.weight(), submatrix(term.quad(), keep, keep),
                     subvector(term.lin(), keep));
  }
  return out;
}

std::vector<GaussianTerm> reduced_terms(const GaussianSumState& state, int mode,
                                        const DetectorPovm& povm) {
  check_mode(state, mode);
  auto no_click = integrate_no_click(state, mode, povm.efficiency);
  if (povm.outcome == Outcome::no_click) return no_click;
  auto terms = restrict_to_origin(state, mode);
  for (const auto& t : no_click) terms.push_back(t.scaled(-1.0));
  return terms;
}

Complex sum_weights(const std::vector<GaussianTerm>& terms) {
  Complex total = 0.0;
  for (const auto& t : terms) total += t.weight();
  return total;
}

}  // namespace

GaussianTerm::GaussianTerm(Complex weight, Eigen::MatrixXd quad, Eigen::VectorXcd lin)
    : weight_(weight), quad_(std::move(quad)), lin_(std::move(lin)) {
  if (quad_.rows() != quad_.cols() || quad_.rows() != lin_.size() || lin_.size() % 2 != 0) {
    throw DomainError("GaussianTerm: quad must be 2n x 2n and lin of length 2n");
  }
  quad_ = 0.5 * (quad_ + quad_.transpose()).eval();
}

Complex GaussianTerm::evaluate(const Eigen::VectorXd& r) const {
  const double q = r.dot(quad_ * r);
  const Complex l = (lin_.transpose() * r.cast<Complex>())(0, 0);
  return weight_ * std::exp(-0.5 * q + l);
}

GaussianTerm GaussianTerm::scaled(Complex factor) const {
  return GaussianTerm(weight_ * factor, quad_, lin_);
}

GaussianTerm GaussianTerm::reflected() const { return GaussianTerm(weight_, quad_, -lin_); }

GaussianSumState::GaussianSumState(int modes, std::vector<GaussianTerm> terms, std::string label)
    : modes_(modes), terms_(std::move(terms)), label_(std::move(label)) {
  if (modes_ < 0) throw DomainError("GaussianSumState: negative mode count");
  for (const auto& t : terms_) {
    if (t.modes() != modes_) throw DomainError("GaussianSumState: term mode count mismatch");
  }
}

Complex GaussianSumState::chi(std::span<const Complex> xi) const {
  if (static_cast<int>(xi.size()) != modes_) throw DomainError("chi: wrong number of arguments");
  return chi(pack(xi));
}

Complex GaussianSumState::chi(const Eigen::VectorXd& r) const {
  Complex total = 0.0;
  for (const auto& t : terms_) total += t.evaluate(r);
  return total;
}

Complex GaussianSumState::trace() const { return sum_weights(terms_); }

GaussianSumState GaussianSumState::scaled(Complex factor) const {
  std::vector<GaussianTerm> terms;
  terms.reserve(terms_.size());
  for (const auto& t : terms_) terms.push_back(t.scaled(factor));
  return GaussianSumState(modes_, std::move(terms), label_);
}

GaussianSumState GaussianSumState::relabeled(std::string label) const {
  return GaussianSumState(modes_, terms_, std::move(label));
}

Eigen::VectorXd pack(std::span<const Complex> xi) {
  Eigen::VectorXd r(2 * xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) {
    r(2 * j) = xi[j].real();
    r(2 * j + 1) = xi[j].imag();
  }
  return r;
}

DetectorPovm::DetectorPovm(double efficiency_, Outcome outcome_)
    : efficiency(efficiency_), outcome(outcome_) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw DomainError("detector efficiency must lie in (0, 1]");
  }
}

GaussianTerm DetectorPovm::no_click_term() const {
  const double kappa = (2.0 - efficiency) / efficiency;
  return GaussianTerm(1.0 / efficiency, kappa * Eigen::MatrixXd::Identity(2, 2),
                      Eigen::VectorXcd::Zero(2));
}

GaussianSumState tensor(const GaussianSumState& a, const GaussianSumState& b) {
  const int na = 2 * a.modes();
  const int nb = 2 * b.modes();
  std::vector<GaussianTerm> terms;
  terms.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(na + nb, na + nb);
      quad.topLeftCorner(na, na) = ta.quad();
      quad.bottomRightCorner(nb, nb) = tb.quad();
      Eigen::VectorXcd lin(na + nb);
      lin << ta.lin(), tb.lin();
      terms.emplace_back(ta.weight() * tb.weight(), std::move(quad), std::move(lin));
    }
  }
  return GaussianSumState(a.modes() + b.modes(), std::move(terms),
                          a.label() + " (x) " + b.label());
}

GaussianSumState substitute_beamsplitter(const GaussianSumState& state, int mode_i, int mode_j,
                                         double t, double r, const Tolerances& tol) {
  check_mode(state, mode_i);
  check_mode(state, mode_j);
  if (mode_i == mode_j) throw DomainError("beamsplitter modes must be distinct");
  if (std::abs(t * t + r * r - 1.0) > tol.unitarity) {
    throw DomainError("beamsplitter coefficients must satisfy t^2 + r^2 = 1");
  }
  const int dim = 2 * state.modes();
  Eigen::MatrixXd map = Eigen::MatrixXd::Identity(dim, dim);
  for (int c = 0; c < 2; ++c) {
    const int i = 2 * mode_i + c;
    const int j = 2 * mode_j + c;
    map(i, i) = t;
    map(i, j) = r;
    map(j, i) = -r;
    map(j, j) = t;
  }
  const Eigen::MatrixXcd map_c = map.cast<Complex>();
  std::vector<GaussianTerm> terms;
  terms.reserve(state.terms().size());
  for (const auto& term : state.terms()) {
    terms.emplace_back(term.weight(), map.transpose() * term.quad() * map,
                       map_c.transpose() * term.lin());
  }
  return GaussianSumState(state.modes(), std::move(terms), state.label());
}

Complex trace_product(const GaussianSumState& a, const GaussianSumState& b) {
  if (a.modes() != b.modes()) throw DomainError("trace_product: mode counts differ");
  const double norm = std::pow(kPi, -a.modes());
  Complex total = 0.0;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      const GaussianIntegral integral(ta.quad() + tb.quad());
      total += ta.weight() * tb.weight() * integral.value(ta.lin() - tb.lin());
    }
  }
  return total * norm;
}

double overlap(const GaussianSumState& a, const GaussianSumState& b) {
  return trace_product(a, b).real();
}

double purity(const GaussianSumState& state) { return overlap(state, state); }

double detection_probability(const GaussianSumState& state, int mode, const DetectorPovm& povm) {
  return sum_weights(reduced_terms(state, mode, povm)).real();
}

Conditioned condition(const GaussianSumState& state, int mode, const DetectorPovm& povm,
                      const Tolerances& tol) {
  if (state.modes() < 2) throw DomainError("condition: need at least two modes");
  auto terms = reduced_terms(state, mode, povm);
  const double probability = sum_weights(terms).real();
  if (!(probability >= tol.probability_floor)) {
    std::ostringstream os;
    os << "conditioning on a negligible event (probability " << probability << ")";
    throw NegligibleEventError(os.str(), probability);
  }
  for (auto& t : terms) t = t.scaled(1.0 / probability);
  std::string label = state.label() + (povm.outcome == Outcome::click ? " | click" : " | no-click");
  return {GaussianSumState(state.modes() - 1, std::move(terms), std::move(label)),
          std::min(probability, 1.0)};
}

namespace {

std::vector<double> lattice(double lo, double hi, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (!(hi >= lo)) throw DomainError("grid bounds must satisfy min <= max");
  std::vector<double> pts;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  pts.reserve(count);
  for (long k = 0; k < count; ++k) pts.push_back(lo + static_cast<double>(k) * step);
  return pts;
}

struct PreparedTerm {
  Complex weight;
  GaussianIntegral integral;
  Eigen::VectorXcd lin;
};

}  // namespace

std::vector<double> QuadratureGrid::q_points() const { return lattice(q_min, q_max, step); }
std::vector<double> QuadratureGrid::p_points() const { return lattice(p_min, p_max, step); }

double WignerField::minimum() const { return values.minCoeff(); }

double WignerField::integral() const {
  auto weights = [](const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
      const double h = 0.5 * (x[k + 1] - x[k]);
      w[k] += h;
      w[k + 1] += h;
    }
    return w;
  };
  const auto wq = weights(q);
  const auto wp = weights(p);
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) total += wq[i] * wp[j] * values(i, j);
  return total;
}

WignerField wigner(const GaussianSumState& state, const QuadratureGrid& grid) {
  if (state.modes() != 1) throw DomainError("wigner: single-mode state required");
  WignerField field;
  field.q = grid.q_points();
  field.p = grid.p_points();
  field.values.resize(field.q.size(), field.p.size());

  std::vector<PreparedTerm> prepared;
  prepared.reserve(state.terms().size());
  for (const auto& t : state.terms()) prepared.push_back({t.weight(), GaussianIntegral(t.quad()), t.lin()});

  // W(beta) = (1/pi^2) int d^2 xi chi(xi) exp(beta xi* - beta* xi); the extra
  // 1/2 converts d^2 beta to dq dp.
  const double scale = 0.5 / (kPi * kPi);
  for (std::size_t i = 0; i < field.q.size(); ++i) {
    for (std::size_t j = 0; j < field.p.size(); ++j) {
      const double u = field.q[i] / std::numbers::sqrt2;
      const double v = field.p[j] / std::numbers::sqrt2;
      Eigen::VectorXcd shift(2);
      shift << Complex(0.0, 2.0 * v), Complex(0.0, -2.0 * u);
      Complex total = 0.0;
      for (const auto& pt : prepared) total += pt.weight * pt.integral.value(pt.lin + shift);
      field.values(i, j) = scale * total.real();
    }
  }
  return field;
}

double wigner_at(const GaussianSumState& state, double q, double p) {
  QuadratureGrid g{q, q, p, p, 1.0};
  return wigner(state, g).values(0, 0);
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate(const GaussianSumState& state, bool is_state, const Tolerances& tol) {
  ValidationReport report;
  if (is_state) {
    const double err = std::abs(state.trace() - 1.0);
    report.checks.push_back({"normalization", err <= tol.normalization, err, "|chi(0) - 1|"});
  }

  std::mt19937_64 rng(0x5ca3f00d);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  Eigen::VectorXd r(2 * state.modes());
  for (int k = 0; k < tol.hermiticity_probes; ++k) {
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = gauss(rng);
    worst = std::max(worst, std::abs(state.chi(Eigen::VectorXd(-r)) - std::conj(state.chi(r))));
  }
  report.checks.push_back(
      {"hermiticity", worst <= tol.hermiticity, worst, "max |chi(-xi) - chi(xi)*|"});

  if (is_state) {
    double p = 0.0;
    std::string detail = "Tr[rho^2]";
    bool ok = false;
    try {
      p = purity(state);
      ok = p > 0.0 && p <= 1.0 + tol.purity_excess;
    } catch (const DomainError& e) {
      detail = e.what();
    }
    report.checks.push_back({"purity", ok, p, detail});
  }
  return report;
}

}  // namespace scamp::phase_space
