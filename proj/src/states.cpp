#include "scamp/states.hpp"

#include "scamp/errors.hpp"

#include <cmath>
#include <sstream>

namespace scamp::states {

using phase_space::GaussianSumState;
using phase_space::GaussianTerm;

namespace {

GaussianTerm single_mode_term(Complex weight, double m_xx, double m_yy, Complex l_x, Complex l_y) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = m_xx;
  m(1, 1) = m_yy;
  Eigen::VectorXcd l(2);
  l << l_x, l_y;
  return GaussianTerm(weight, std::move(m), std::move(l));
}

// chi(xi) -> chi(x e^s + i y e^{-s}), the action of S(s) . S(s)^dag.
GaussianSumState squeeze_arguments(const GaussianSumState& state, double s, std::string label) {
  Eigen::MatrixXd scale = Eigen::MatrixXd::Zero(2, 2);
  scale(0, 0) = std::exp(s);
  scale(1, 1) = std::exp(-s);
  std::vector<GaussianTerm> terms;
  for (const auto& t : state.terms()) {
    terms.emplace_back(t.weight(), scale * t.quad() * scale, scale.cast<Complex>() * t.lin());
  }
  return GaussianSumState(1, std::move(terms), std::move(label));
}

// alpha^n / sqrt(n!) for n = 0..dim-1, built by recurrence.
Eigen::VectorXcd power_series(Complex alpha, int dim) {
  Eigen::VectorXcd c(dim);
  c(0) = 1.0;
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

void require_dim(int dim) {
  if (dim < 1) throw DomainError("Fock dimension must be positive");
}

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os << what << value;
  return os.str();
}

}  // namespace

CatSpec::CatSpec(double alpha_, Parity parity_) : alpha(alpha_), parity(parity_) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError("cat amplitude must be real and non-negative");
  }
  if (parity == Parity::odd && alpha == 0.0) {
    throw DomainError("odd cat state is undefined at alpha = 0");
  }
}

double CatSpec::norm_sq() const {
  return 1.0 / (2.0 + 2.0 * sign(parity) * std::exp(-2.0 * alpha * alpha));
}

double SqueezeSpec::decibels() const { return -10.0 * std::log10(std::exp(2.0 * s)); }

GaussianSumState vacuum_chi() {
  return GaussianSumState(1, {single_mode_term(1.0, 1.0, 1.0, 0.0, 0.0)}, "vacuum");
}

GaussianSumState coherent_chi(Complex alpha) {
  // xi alpha* - xi* alpha = 2i (y Re(alpha) - x Im(alpha))
  const Complex i(0.0, 1.0);
  return GaussianSumState(
      1, {single_mode_term(1.0, 1.0, 1.0, -2.0 * i * alpha.imag(), 2.0 * i * alpha.real())},
      "coherent");
}

GaussianSumState cat_chi(const CatSpec& cat) {
  const double a = cat.alpha;
  const double n2 = cat.norm_sq();
  const double cross = sign(cat.parity) * n2 * std::exp(-2.0 * a * a);
  const Complex i(0.0, 1.0);
  std::vector<GaussianTerm> terms{
      single_mode_term(n2, 1.0, 1.0, 0.0, 2.0 * i * a),
      single_mode_term(n2, 1.0, 1.0, 0.0, -2.0 * i * a),
      single_mode_term(cross, 1.0, 1.0, -2.0 * a, 0.0),
      single_mode_term(cross, 1.0, 1.0, 2.0 * a, 0.0),
  };
  return GaussianSumState(1, std::move(terms),
                          std::string(to_string(cat.parity)) + " cat");
}

GaussianSumState squeezed_vacuum_chi(double s) {
  return GaussianSumState(
      1, {single_mode_term(1.0, std::exp(2.0 * s), std::exp(-2.0 * s), 0.0, 0.0)},
      "squeezed vacuum");
}

GaussianSumState squeezed_coherent_chi(double s, Complex alpha) {
  return squeeze_arguments(coherent_chi(alpha), s, "squeezed coherent");
}

GaussianSumState squeezed_cat_chi(double s, const CatSpec& cat) {
  return squeeze_arguments(cat_chi(cat), s, "squeezed cat");
}

fock::FockVector vacuum_fock(int dim) { return fock::FockVector::basis(0, dim); }

fock::FockVector coherent_fock(Complex alpha, int dim) {
  require_dim(dim);
  return fock::FockVector(std::exp(-0.5 * std::norm(alpha)) * power_series(alpha, dim));
}

fock::FockVector cat_fock(const CatSpec& cat, int dim) {
  require_dim(dim);
  const double a = cat.alpha;
  const Eigen::VectorXcd c = power_series(a, dim);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  const double prefactor = std::sqrt(cat.norm_sq()) * std::exp(-0.5 * a * a) * 2.0;
  const int first = cat.parity == Parity::even ? 0 : 1;
  for (int n = first; n < dim; n += 2) v(n) = prefactor * c(n);
  return fock::FockVector(std::move(v));
}

fock::FockVector squeezed_vacuum_fock(double s, int dim) {
  require_dim(dim);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  const double ratio = -0.5 * std::tanh(s);
  double amp = std::sqrt(1.0 / std::cosh(s));
  for (int m = 0; 2 * m < dim; ++m) {
    if (m > 0) amp *= std::sqrt((2.0 * m) * (2.0 * m - 1.0)) / m * ratio;
    v(2 * m) = amp;
  }
  return fock::FockVector(std::move(v));
}

fock::FockVector squeezed_coherent_fock(double s, Complex alpha, int dim) {
  return fock::squeeze_fock(coherent_fock(alpha, dim), s);
}

AnyState make_state(StateKind kind, const StateParams& p, Representation rep) {
  if (std::abs(p.alpha) > p.guard.max_alpha) {
    throw DomainError(describe("alpha outside the validity window: ", p.alpha));
  }
  if (std::abs(p.s) > p.guard.max_abs_s) {
    throw DomainError(describe("squeezing outside the validity window: ", p.s));
  }
  const bool chi = rep == Representation::chi;
  switch (kind) {
    case StateKind::vacuum:
      if (chi) return vacuum_chi();
      return vacuum_fock(p.dim);
    case StateKind::coherent:
      if (chi) return coherent_chi(p.alpha);
      return coherent_fock(p.alpha, p.dim);
    case StateKind::cat: {
      const CatSpec cat(p.alpha, p.parity);
      if (chi) return cat_chi(cat);
      return cat_fock(cat, p.dim);
    }
    case StateKind::squeezed_vacuum:
      if (chi) return squeezed_vacuum_chi(p.s);
      return squeezed_vacuum_fock(p.s, p.dim);
    case StateKind::squeezed_coherent:
      if (chi) return squeezed_coherent_chi(p.s, p.alpha);
      return squeezed_coherent_fock(p.s, p.alpha, p.dim);
  }
  throw DomainError("unknown state kind");
}

double cat_squeezed_overlap(double alpha, double s) {
  return std::exp(-alpha * alpha * std::tanh(s)) / (std::cosh(s) * std::cosh(alpha * alpha));
}

SqueezeSpec optimal_squeezing(double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("optimal_squeezing: alpha must be non-negative");
  return {-0.5 * std::asinh(2.0 * alpha * alpha)};
}

ChannelParams comparison_channel_params(double alpha, double s, double r1) {
  if (!(r1 >= 0.0 && r1 <= 1.0)) throw DomainError("comparison_channel_params: r1 must lie in [0, 1]");
  const double u = 1.0 - r1 * r1;
  const double ch = std::cosh(s);
  const double sh = std::sinh(s);
  ChannelParams out{};
  out.s_prime = 0.5 * std::log((ch + u * sh) / (ch - u * sh));
  out.alpha_prime = r1 * alpha * ch / std::sqrt(ch * ch - u * u * sh * sh);
  const double r2 = r1 * r1;
  const double es = std::exp(s);
  const double ems = std::exp(-s);
  out.noclick_prob = std::sqrt(1.0 / ((ems + r2 * sh) * (es - r2 * sh))) *
                     std::exp(-es * u * sh * alpha * alpha / (es - r2 * sh));
  out.noclick_reliable = false;
  return out;
}

fock::FockVector subtracted_squeezed_cat(double alpha, Parity parity, double s, int dim) {
  const CatSpec input(alpha, parity);
  const fock::FockVector squeezed = fock::squeeze_fock(cat_fock(input, dim), s);
  const auto subtracted = fock::ladder(squeezed, fock::Ladder::annihilate);
  if (subtracted.norm == 0.0) throw DomainError("photon subtraction annihilated the state");
  return subtracted.vector.normalized();
}

double subtracted_squeezed_cat_overlap(double alpha, Parity parity, double s, double beta,
                                       int dim) {
  const CatSpec target(beta, opposite(parity));
  return fock::overlap(cat_fock(target, dim), subtracted_squeezed_cat(alpha, parity, s, dim));
}

double subtracted_squeezed_cat_overlap_closed_form(double alpha, Parity parity, double s,
                                                   double beta) {
  const double pm = sign(parity);  // upper sign for an even input
  const double ch = std::cosh(s);
  const double sh = std::sinh(s);
  const double th = std::tanh(s);
  const double gamma = alpha * ch - alpha * sh;
  const double pref = 2.0 * std::sqrt(1.0 / ch);
  // Real arguments: the (-beta gamma* + beta* gamma)/2 phases vanish.
  const double e1 = std::exp(-0.5 * (beta - gamma) * (beta - gamma) -
                             0.5 * th * (beta - gamma) * (beta - gamma));
  const double e2 = std::exp(-0.5 * (beta + gamma) * (beta + gamma) -
                             0.5 * th * (beta + gamma) * (beta + gamma));
  const double bracket = pref * e1 * (gamma - (beta - gamma) * th) +
                         pref * e2 * (pm * gamma + pm * (beta + gamma) * th);
  const double ea = std::exp(-2.0 * alpha * alpha);
  const double n = (2.0 - pm * 2.0 * std::exp(-2.0 * beta * beta)) *
                   (2.0 * alpha * alpha * (1.0 - pm * ea) * (ch * ch + sh * sh) +
                    (2.0 + pm * 2.0 * ea) * (sh * sh - 2.0 * ch * sh * alpha * alpha));
  return bracket * bracket / n;
}

}  // namespace scamp::states
