#include "scamp/fock.hpp"

#include "scamp/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scamp::fock {

namespace {

void require_efficiency(double efficiency) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw DomainError("detector efficiency must lie in (0, 1]");
  }
}

double no_click_weight(int n, double efficiency) { return std::pow(1.0 - efficiency, n); }

}  // namespace

FockVector::FockVector(Eigen::VectorXcd amps) : amps_(std::move(amps)) {
  if (amps_.size() == 0) throw DomainError("FockVector: empty amplitude vector");
}

FockVector FockVector::basis(int n, int dim) {
  if (n < 0 || n >= dim) throw DomainError("FockVector::basis: index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(n) = 1.0;
  return FockVector(std::move(v));
}

FockVector FockVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  return FockVector(amps_ / n);
}

double FockVector::tail_mass(int count) const {
  const int start = std::max(0, dim() - count);
  return amps_.tail(dim() - start).squaredNorm();
}

FockVector FockVector::resized(int dim) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  const int n = std::min(dim, this->dim());
  v.head(n) = amps_.head(n);
  return FockVector(std::move(v));
}

double overlap(const FockVector& a, const FockVector& b) {
  const int n = std::min(a.dim(), b.dim());
  return std::norm(a.amps().head(n).dot(b.amps().head(n)));
}

FockDensity::FockDensity(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw DomainError("FockDensity: matrix must be square and non-empty");
  }
}

FockDensity FockDensity::pure(const FockVector& v) {
  return FockDensity(v.amps() * v.amps().adjoint());
}

double FockDensity::purity() const { return (matrix_ * matrix_).trace().real(); }

double FockDensity::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double FockDensity::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double FockDensity::parity_population(Parity parity) const {
  double total = 0.0;
  for (int n = parity == Parity::even ? 0 : 1; n < dim(); n += 2) total += matrix_(n, n).real();
  return total;
}

double FockDensity::tail_mass(int count) const {
  double total = 0.0;
  for (int n = std::max(0, dim() - count); n < dim(); ++n) total += matrix_(n, n).real();
  return total;
}

TwoModeFock::TwoModeFock(Eigen::MatrixXcd amps) : amps_(std::move(amps)) {
  if (amps_.size() == 0) throw DomainError("TwoModeFock: empty amplitude matrix");
}

TwoModeFock TwoModeFock::product(const FockVector& a, const FockVector& b) {
  return TwoModeFock(a.amps() * b.amps().transpose());
}

double TwoModeFock::mass_at_or_above_total(int total) const {
  double mass = 0.0;
  for (int i = 0; i < dim1(); ++i)
    for (int j = std::max(0, total - i); j < dim2(); ++j) mass += std::norm(amps_(i, j));
  return mass;
}

BeamSplitterFock::BeamSplitterFock(double t, double r, int dim) : t_(t), r_(r), dim_(dim) {
  if (std::abs(t * t + r * r - 1.0) > 1e-12) {
    throw DomainError("beamsplitter coefficients must satisfy t^2 + r^2 = 1");
  }
  if (dim <= 0) throw DomainError("beamsplitter dimension must be positive");
  const double theta = std::atan2(r, t);
  blocks_.reserve(dim);
  for (int n = 0; n < dim; ++n) {
    // Generator a b^dag - a^dag b on |k, n - k>.
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int k = 1; k <= n; ++k) {
      const double amp = std::sqrt(static_cast<double>(k) * (n - k + 1));
      gen(k - 1, k) = theta * amp;
      gen(k, k - 1) = -theta * amp;
    }
    blocks_.push_back(gen.exp());
  }
}

TwoModeFock BeamSplitterFock::apply(const TwoModeFock& state) const {
  if (state.dim1() != dim_ || state.dim2() != dim_) {
    std::ostringstream os;
    os << "beamsplitter built for dimension " << dim_ << " applied to a " << state.dim1() << "x"
       << state.dim2() << " state";
    throw DomainError(os.str());
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  const auto& in = state.amps();
  for (int n = 0; n < dim_; ++n) {
    Eigen::VectorXcd v(n + 1);
    for (int k = 0; k <= n; ++k) v(k) = in(k, n - k);
    if (v.squaredNorm() == 0.0) continue;
    const Eigen::VectorXcd w = blocks_[n].cast<Complex>() * v;
    for (int k = 0; k <= n; ++k) out(k, n - k) = w(k);
  }
  return TwoModeFock(std::move(out));
}

TwoModeFock beamsplitter_fock(const TwoModeFock& state, double t, double r) {
  if (state.dim1() != state.dim2()) throw DomainError("beamsplitter_fock: dimension mismatch");
  return BeamSplitterFock(t, r, state.dim1()).apply(state);
}

Eigen::MatrixXd annihilation_matrix(int dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

FockVector squeeze_fock(const FockVector& state, double s, int pad, double tail_tolerance) {
  if (std::abs(s) > 2.0) throw DomainError("squeeze_fock: |s| must not exceed 2");
  if (s == 0.0) return state;
  const int n = state.dim();
  const int big = n + std::max(pad, 0);
  const Eigen::MatrixXd a = annihilation_matrix(big);
  const Eigen::MatrixXd gen = 0.5 * s * (a * a - a.transpose() * a.transpose());
  const Eigen::MatrixXd op = gen.exp();
  const Eigen::VectorXcd out = op.cast<Complex>() * state.resized(big).amps();
  FockVector cropped(out.head(n));
  const double lost = out.tail(big - n).squaredNorm();
  if (cropped.tail_mass() + lost > tail_tolerance) {
    std::ostringstream os;
    os << "squeeze_fock: truncation " << n << " too small for s = " << s
       << " (tail mass " << cropped.tail_mass() + lost << ")";
    throw TruncationError(os.str(), n + 20);
  }
  return cropped;
}

LadderResult ladder(const FockVector& state, Ladder which) {
  const int n = state.dim();
  if (which == Ladder::annihilate) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    for (int k = 1; k < n; ++k) v(k - 1) = std::sqrt(static_cast<double>(k)) * state[k];
    const double norm = v.norm();
    return {FockVector(std::move(v)), norm};
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n + 1);
  for (int k = 0; k < n; ++k) v(k + 1) = std::sqrt(static_cast<double>(k + 1)) * state[k];
  const double norm = v.norm();
  return {FockVector(std::move(v)), norm};
}

namespace {

// Unnormalized conditional state Tr_mode[rho (1 (x) Pi)] of a pure state.
Eigen::MatrixXcd conditioned_block(const TwoModeFock& state, int mode, double efficiency,
                                   Outcome outcome) {
  const Eigen::MatrixXcd& c = mode == 0 ? state.amps() : Eigen::MatrixXcd(state.amps().transpose());
  const int measured = static_cast<int>(c.rows());
  const int kept = static_cast<int>(c.cols());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(kept, kept);
  for (int n = 0; n < measured; ++n) {
    const double nc = no_click_weight(n, efficiency);
    const double w = outcome == Outcome::no_click ? nc : 1.0 - nc;
    if (w == 0.0) continue;
    const Eigen::VectorXcd phi = c.row(n).transpose();
    rho.noalias() += w * phi * phi.adjoint();
  }
  return rho;
}

FockConditioned finish(Eigen::MatrixXcd rho, double floor) {
  const double probability = rho.trace().real();
  if (!(probability >= floor)) {
    std::ostringstream os;
    os << "conditioning on a negligible event (probability " << probability << ")";
    throw NegligibleEventError(os.str(), probability);
  }
  rho /= probability;
  return {FockDensity(std::move(rho)), std::min(probability, 1.0)};
}

void require_mode(int mode) {
  if (mode != 0 && mode != 1) throw DomainError("condition_fock: mode must be 0 or 1");
}

}  // namespace

FockConditioned condition_fock(const TwoModeFock& state, int mode, double efficiency,
                               Outcome outcome, double floor) {
  require_efficiency(efficiency);
  require_mode(mode);
  return finish(conditioned_block(state, mode, efficiency, outcome), floor);
}

FockConditioned condition_fock(std::span<const WeightedTwoMode> ensemble, int mode,
                               double efficiency, Outcome outcome, double floor) {
  require_efficiency(efficiency);
  require_mode(mode);
  if (ensemble.empty()) throw DomainError("condition_fock: empty ensemble");
  Eigen::MatrixXcd rho;
  for (const auto& member : ensemble) {
    Eigen::MatrixXcd block = conditioned_block(member.state, mode, efficiency, outcome);
    if (rho.size() == 0) {
      rho = member.weight * block;
    } else {
      rho += member.weight * block;
    }
  }
  return finish(std::move(rho), floor);
}

std::vector<std::pair<double, FockVector>> decompose(const FockDensity& rho, double cutoff) {
  const Eigen::MatrixXcd h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  std::vector<std::pair<double, FockVector>> out;
  for (Eigen::Index k = solver.eigenvalues().size() - 1; k >= 0; --k) {
    const double w = solver.eigenvalues()(k);
    if (w <= cutoff) continue;
    out.emplace_back(w, FockVector(solver.eigenvectors().col(k)));
  }
  return out;
}

double fidelity_fock(const FockVector& pure, const FockDensity& rho) {
  const Eigen::VectorXcd psi = pure.resized(rho.dim()).amps();
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

Eigen::MatrixXcd displacement_matrix(Complex xi, int dim, int pad) {
  const int big = dim + std::max(pad, 0);
  const Eigen::MatrixXcd a = annihilation_matrix(big).cast<Complex>();
  const Eigen::MatrixXcd gen = xi * a.adjoint() - std::conj(xi) * a;
  return gen.exp().topLeftCorner(dim, dim);
}

namespace {
bool probe_warning(Complex xi, int dim) { return std::abs(xi) > std::sqrt(double(dim)) / 2.0; }
}  // namespace

ChiProbe chi_from_fock(const FockDensity& rho, Complex xi, int pad) {
  const Eigen::MatrixXcd d = displacement_matrix(xi, rho.dim(), pad);
  return {(rho.matrix() * d).trace(), probe_warning(xi, rho.dim())};
}

ChiProbe chi_from_fock(const FockVector& state, Complex xi, int pad) {
  const Eigen::MatrixXcd d = displacement_matrix(xi, state.dim(), pad);
  return {state.amps().dot(d * state.amps()), probe_warning(xi, state.dim())};
}

ChiProbe chi_from_fock(const TwoModeFock& state, Complex xi1, Complex xi2, int pad) {
  const Eigen::MatrixXcd d1 = displacement_matrix(xi1, state.dim1(), pad);
  const Eigen::MatrixXcd d2 = displacement_matrix(xi2, state.dim2(), pad);
  const Eigen::MatrixXcd moved = d1 * state.amps() * d2.transpose();
  const Complex value = (state.amps().conjugate().cwiseProduct(moved)).sum();
  return {value, probe_warning(xi1, state.dim1()) || probe_warning(xi2, state.dim2())};
}

}  // namespace scamp::fock
