#pragma once

// The two-stage state comparison amplifier: a comparison stage (input mixed
// with a guess state, output kept when detector 1 stays dark) followed by a
// photon-subtraction stage (weak tap onto detector 2, output kept on a click).

#include "scamp/common.hpp"
#include "scamp/fock.hpp"
#include "scamp/phase_space.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace scamp::pipeline {

enum class Engine { chi, fock, both };
enum class InputKind { cat, coherent };
/// Coherent-state amplifier only: guess +t1 alpha / r1 (correct) or its negative.
enum class GuessSign { correct, wrong };

struct PipelineConfig {
  InputKind input = InputKind::cat;
  double alpha = 1.0;
  Parity parity = Parity::even;
  /// Squeezing of the guess state; empty selects -asinh(2 alpha^2)/2.
  std::optional<double> squeezing;
  GuessSign guess = GuessSign::correct;

  double t1 = 0.70710678118654752440;
  double r1 = 0.70710678118654752440;
  double t2 = 0.97467943448089639068;  // sqrt(0.95)
  double eta1 = 1.0;
  double eta2 = 1.0;

  Engine engine = Engine::chi;
  /// Fixed Fock dimension; empty starts at 40 and escalates as needed.
  std::optional<int> truncation;
  /// Also report the fidelity with the ideal cat of this size.
  std::optional<double> target_beta;
  /// Compare against a same-parity cat instead of the opposite one (diagnostic).
  bool same_parity_target = false;

  double probability_floor = 1e-12;
  double agreement_tolerance = 1e-6;
  /// Maximum population a truncated Fock run may discard.
  double truncation_tolerance = 1e-12;

  double r2() const;
  double resolved_squeezing() const;
  Parity target_parity() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// beta_star and fidelity_star are NaN when the stage-2 click has negligible
/// probability; the stage probabilities are still filled in.
struct EngineResult {
  double p_noclick_stage1 = 0.0;
  double p_click_stage2_given_stage1 = 0.0;
  double p_success = 0.0;
  double beta_star = 0.0;
  double fidelity_star = 0.0;
  std::optional<double> fidelity_at_target;
};

struct PipelineResult {
  PipelineConfig config;
  double squeezing = 0.0;
  Parity target_parity = Parity::odd;

  /// Empty when the stage-2 click is negligible.
  std::optional<phase_space::GaussianSumState> chi_output;
  std::optional<fock::FockDensity> fock_output;
  int fock_dim = 0;
  std::optional<EngineResult> chi;
  std::optional<EngineResult> fock;

  // Headline values, taken from the chi engine whenever it ran.
  double p_noclick_stage1 = 0.0;
  double p_click_stage2_given_stage1 = 0.0;
  double p_success = 0.0;
  double beta_star = 0.0;
  double fidelity_star = 0.0;
  std::optional<double> fidelity_at_target;
  double gain_amp = 0.0;
  double gain_intensity = 0.0;

  std::optional<bool> engines_agree;
  double engine_max_deviation = 0.0;
};

struct OptimizerOptions {
  int coarse_points = 64;
  double tolerance = 1e-9;
  /// Least-squares refinement of the golden-section result; 0 points disables it.
  int polish_points = 41;
  double polish_halfwidth = 0.02;
};

struct GainOptimum {
  double beta_star;
  double fidelity_star;
  std::vector<std::pair<double, double>> scan;
};

/// Maximizes fidelity(beta) over [max(alpha/2, beta_min), 3 alpha + 0.5]: a
/// coarse scan brackets the best point, golden-section search refines it.
/// Throws BracketError when the best coarse point sits on the interval edge.
GainOptimum maximize_fidelity(const std::function<double(double)>& fidelity, double alpha,
                              double beta_min, const OptimizerOptions& options = {});

/// Runs the configured amplifier (cat or coherent input) on the selected engines.
PipelineResult run(const PipelineConfig& config, const OptimizerOptions& options = {});

/// Parity-swap amplifier for an even or odd cat input.
PipelineResult run_parity_swap(const PipelineConfig& config, const OptimizerOptions& options = {});

/// Coherent-state amplifier with a coherent guess +/- t1 alpha / r1. The
/// target is the coherent state |alpha / r1>; beta_star maximizes over
/// coherent amplitudes.
PipelineResult run_coherent_scamp(double alpha, GuessSign guess, PipelineConfig config,
                                  const OptimizerOptions& options = {});

/// Runs the pipeline and maximizes the fidelity against cats of the given parity.
GainOptimum optimize_gain(const PipelineConfig& config, Parity target_parity,
                          const OptimizerOptions& options = {});

struct IdealGainRow {
  double alpha;
  double s;
  double s_prime;
  double alpha_prime;
  double beta_star;
  double gain_amp;
  /// Gain of the full pipeline at eta = 1 for the same alpha; NaN when not requested.
  double pipeline_gain_amp;
};

/// Gain of exact photon subtraction on the squeezed cat produced by an ideal
/// comparison stage with optimal guess squeezing. When `t2` is given the full
/// pipeline gain is computed alongside.
std::vector<IdealGainRow> ideal_gain_curve(const std::vector<double>& alphas, double r1,
                                           std::optional<double> t2 = std::nullopt,
                                           const OptimizerOptions& options = {});

struct WignerReport {
  phase_space::WignerField output;
  phase_space::WignerField ideal;
  double beta_star;
  double min_output;
  double min_ideal;
  double ratio;  // min_output / min_ideal
};

/// Wigner functions of the chi-engine output and of the best-matching ideal cat.
WignerReport wigner_report(const PipelineConfig& config, const phase_space::QuadratureGrid& grid,
                           const OptimizerOptions& options = {});

}  // namespace scamp::pipeline
