#pragma once

// Constructors for every state used by the amplifier, in both representations,
// plus the closed-form scalar formulas the engines are audited against.

#include "scamp/common.hpp"
#include "scamp/fock.hpp"
#include "scamp/phase_space.hpp"

#include <variant>

namespace scamp::states {

/// Even or odd cat N(|alpha> +/- |-alpha>) with real alpha >= 0.
struct CatSpec {
  double alpha;
  Parity parity;

  CatSpec(double alpha, Parity parity);
  /// N^2 = 1 / (2 +/- 2 exp(-2 alpha^2)).
  double norm_sq() const;
};

/// Real squeezing parameter s; negative s stretches the x quadrature.
struct SqueezeSpec {
  double s;

  /// -10 log10(exp(2 s)).
  double decibels() const;
};

struct ChannelParams {
  double s_prime;
  double alpha_prime;
  /// Printed closed form for the comparison-stage no-click probability. It
  /// disagrees with the engines away from s = 0 being trivially 1, so it is
  /// never used for pipeline numbers.
  double noclick_prob;
  bool noclick_reliable = false;
};

/// Default validity window for state parameters; override for experiments.
struct Guardrails {
  double max_alpha = 2.0;
  double max_abs_s = 1.5;
};

// -- characteristic-function representation --

phase_space::GaussianSumState vacuum_chi();
phase_space::GaussianSumState coherent_chi(Complex alpha);
phase_space::GaussianSumState cat_chi(const CatSpec& cat);
/// exp(-1/2 (x^2 e^{2s} + y^2 e^{-2s})).
phase_space::GaussianSumState squeezed_vacuum_chi(double s);
/// S(s)|alpha>: chi_alpha evaluated at x e^s + i y e^{-s}.
phase_space::GaussianSumState squeezed_coherent_chi(double s, Complex alpha);
/// S(s)|cat>: the same argument substitution applied to every cat term.
phase_space::GaussianSumState squeezed_cat_chi(double s, const CatSpec& cat);

// -- photon-number representation (exact amplitudes, truncated) --

fock::FockVector vacuum_fock(int dim = fock::kDefaultDim);
fock::FockVector coherent_fock(Complex alpha, int dim = fock::kDefaultDim);
fock::FockVector cat_fock(const CatSpec& cat, int dim = fock::kDefaultDim);
/// Closed-form number-state amplitudes of S(s)|0>.
fock::FockVector squeezed_vacuum_fock(double s, int dim = fock::kDefaultDim);
fock::FockVector squeezed_coherent_fock(double s, Complex alpha, int dim = fock::kDefaultDim);

enum class StateKind { vacuum, coherent, cat, squeezed_vacuum, squeezed_coherent };
enum class Representation { fock, chi };

struct StateParams {
  double alpha = 0.0;
  Parity parity = Parity::even;
  double s = 0.0;
  int dim = fock::kDefaultDim;
  Guardrails guard{};
};

using AnyState = std::variant<phase_space::GaussianSumState, fock::FockVector>;

AnyState make_state(StateKind kind, const StateParams& params, Representation rep);

// -- closed forms --

/// |<alpha_+|zeta>|^2 for real alpha and s.
double cat_squeezed_overlap(double alpha, double s);
/// s = -asinh(2 alpha^2) / 2, the maximizer of cat_squeezed_overlap.
SqueezeSpec optimal_squeezing(double alpha);
/// Squeezing and amplitude of the comparison-stage output for r1 in (0, 1].
ChannelParams comparison_channel_params(double alpha, double s, double r1);

/// |<beta_opp| a S(s) |alpha_parity>|^2 with the photon-subtracted squeezed
/// cat normalized, evaluated in the Fock basis. This is the value used
/// everywhere downstream.
double subtracted_squeezed_cat_overlap(double alpha, Parity parity, double s, double beta,
                                       int dim = 80);
/// Normalized a S(s)|alpha_parity> in the Fock basis.
fock::FockVector subtracted_squeezed_cat(double alpha, Parity parity, double s, int dim = 80);
/// The printed closed form of the same overlap, kept for auditing only.
double subtracted_squeezed_cat_overlap_closed_form(double alpha, Parity parity, double s,
                                                   double beta);

}  // namespace scamp::states
