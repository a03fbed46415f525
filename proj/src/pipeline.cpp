#include "scamp/pipeline.hpp"

#include "scamp/errors.hpp"
#include "scamp/states.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace scamp::pipeline {

namespace ps = scamp::phase_space;

namespace {

constexpr int kStartDim = 40;
constexpr int kDimStep = 20;
constexpr int kMaxDim = 300;
constexpr double kFixedDimTolerance = 1e-10;

[[noreturn]] void config_error(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

bool in_unit_interval(double eta) { return eta > 0.0 && eta <= 1.0; }

// Everything the engines need to know about the two inputs and the target.
struct Setup {
  ps::GaussianSumState chi_input;
  ps::GaussianSumState chi_guess;
  std::function<fock::FockVector(int)> fock_input;
  std::function<fock::FockVector(int)> fock_guess;
  std::function<ps::GaussianSumState(double)> chi_target;
  std::function<fock::FockVector(double, int)> fock_target;
  double beta_min;
};

// A stage-2 click that is (numerically) impossible leaves no output state;
// the stage probabilities are still reported.
struct ChiRun {
  std::optional<ps::GaussianSumState> output;
  EngineResult result;
};

struct FockRun {
  std::optional<fock::FockDensity> output;
  int dim;
  EngineResult result;
};

void mark_no_output(EngineResult& r) {
  r.beta_star = std::numeric_limits<double>::quiet_NaN();
  r.fidelity_star = std::numeric_limits<double>::quiet_NaN();
}

void fill_optimum(EngineResult& r, const std::function<double(double)>& fidelity,
                  const PipelineConfig& cfg, double alpha, double beta_min,
                  const OptimizerOptions& options) {
  const GainOptimum opt = maximize_fidelity(fidelity, alpha, beta_min, options);
  r.beta_star = opt.beta_star;
  r.fidelity_star = opt.fidelity_star;
  if (cfg.target_beta) r.fidelity_at_target = fidelity(*cfg.target_beta);
}

ChiRun run_chi(const PipelineConfig& cfg, const Setup& setup, const OptimizerOptions& options) {
  ps::Tolerances tol;
  tol.probability_floor = cfg.probability_floor;

  const auto joint = ps::tensor(setup.chi_input, setup.chi_guess);
  const auto mixed = ps::substitute_beamsplitter(joint, 0, 1, cfg.t1, cfg.r1, tol);
  const auto stage1 = ps::condition(mixed, 0, ps::DetectorPovm(cfg.eta1, Outcome::no_click), tol);

  const auto tapped_in = ps::tensor(stage1.state, states::vacuum_chi());
  const auto tapped = ps::substitute_beamsplitter(tapped_in, 0, 1, cfg.t2, cfg.r2(), tol);
  const ps::DetectorPovm click(cfg.eta2, Outcome::click);

  ChiRun run{std::nullopt, {}};
  run.result.p_noclick_stage1 = stage1.probability;
  const double p2 = ps::detection_probability(tapped, 1, click);
  run.result.p_click_stage2_given_stage1 = std::clamp(p2, 0.0, 1.0);
  run.result.p_success = stage1.probability * run.result.p_click_stage2_given_stage1;
  if (!(p2 >= cfg.probability_floor)) {
    mark_no_output(run.result);
    return run;
  }
  const auto stage2 = ps::condition(tapped, 1, click, tol);
  run.output = stage2.state.relabeled("amplifier output");
  const auto& out = *run.output;
  fill_optimum(run.result, [&](double beta) { return ps::overlap(setup.chi_target(beta), out); },
               cfg, cfg.alpha, setup.beta_min, options);
  return run;
}

// Population a product input loses to the truncated two-mode space.
double discarded_mass(const fock::TwoModeFock& product, int dim) {
  return 1.0 - (product.amps().squaredNorm() - product.mass_at_or_above_total(dim));
}

int choose_dim(const PipelineConfig& cfg, const Setup& setup) {
  if (cfg.truncation) {
    const int dim = *cfg.truncation;
    const auto product = fock::TwoModeFock::product(setup.fock_input(dim), setup.fock_guess(dim));
    const double lost = discarded_mass(product, dim);
    if (lost > kFixedDimTolerance) {
      std::ostringstream os;
      os << "Fock truncation " << dim << " discards population " << lost;
      throw TruncationError(os.str(), dim + kDimStep);
    }
    return dim;
  }
  for (int dim = kStartDim; dim <= kMaxDim; dim += kDimStep) {
    const auto product = fock::TwoModeFock::product(setup.fock_input(dim), setup.fock_guess(dim));
    if (discarded_mass(product, dim) <= cfg.truncation_tolerance) return dim;
  }
  std::ostringstream os;
  os << "no Fock truncation up to " << kMaxDim << " holds the input state";
  throw TruncationError(os.str(), kMaxDim + kDimStep);
}

FockRun run_fock(const PipelineConfig& cfg, const Setup& setup, const OptimizerOptions& options) {
  const int dim = choose_dim(cfg, setup);
  const auto product = fock::TwoModeFock::product(setup.fock_input(dim), setup.fock_guess(dim));
  const auto mixed = fock::BeamSplitterFock(cfg.t1, cfg.r1, dim).apply(product);
  const auto stage1 =
      fock::condition_fock(mixed, 0, cfg.eta1, Outcome::no_click, cfg.probability_floor);

  const fock::BeamSplitterFock tap(cfg.t2, cfg.r2(), dim);
  const fock::FockVector vacuum = states::vacuum_fock(dim);
  std::vector<fock::WeightedTwoMode> ensemble;
  for (const auto& [weight, psi] : fock::decompose(stage1.state)) {
    ensemble.push_back({weight, tap.apply(fock::TwoModeFock::product(psi, vacuum))});
  }
  FockRun run{std::nullopt, dim, {}};
  run.result.p_noclick_stage1 = stage1.probability;
  try {
    auto stage2 = fock::condition_fock(ensemble, 1, cfg.eta2, Outcome::click, cfg.probability_floor);
    run.result.p_click_stage2_given_stage1 = stage2.probability;
    run.output = std::move(stage2.state);
  } catch (const NegligibleEventError& e) {
    run.result.p_click_stage2_given_stage1 = std::clamp(e.probability(), 0.0, 1.0);
  }
  run.result.p_success = stage1.probability * run.result.p_click_stage2_given_stage1;
  if (!run.output) {
    mark_no_output(run.result);
    return run;
  }
  const auto& out = *run.output;
  fill_optimum(run.result,
               [&](double beta) { return fock::fidelity_fock(setup.fock_target(beta, dim), out); },
               cfg, cfg.alpha, setup.beta_min, options);
  return run;
}

double max_deviation(const EngineResult& a, const EngineResult& b) {
  double d = std::max({std::abs(a.p_noclick_stage1 - b.p_noclick_stage1),
                       std::abs(a.p_click_stage2_given_stage1 - b.p_click_stage2_given_stage1),
                       std::abs(a.p_success - b.p_success)});
  if (std::isnan(a.beta_star) != std::isnan(b.beta_star)) return std::numeric_limits<double>::infinity();
  if (!std::isnan(a.beta_star)) {
    d = std::max({d, std::abs(a.beta_star - b.beta_star), std::abs(a.fidelity_star - b.fidelity_star)});
  }
  if (a.fidelity_at_target && b.fidelity_at_target) {
    d = std::max(d, std::abs(*a.fidelity_at_target - *b.fidelity_at_target));
  }
  return d;
}

PipelineResult execute(const PipelineConfig& cfg, const Setup& setup, Parity target_parity,
                       const OptimizerOptions& options) {
  PipelineResult result;
  result.config = cfg;
  result.squeezing = cfg.resolved_squeezing();
  result.target_parity = target_parity;

  if (cfg.engine != Engine::fock) {
    auto run = run_chi(cfg, setup, options);
    result.chi_output = std::move(run.output);
    result.chi = run.result;
  }
  if (cfg.engine != Engine::chi) {
    auto run = run_fock(cfg, setup, options);
    result.fock_output = std::move(run.output);
    result.fock_dim = run.dim;
    result.fock = run.result;
  }

  const EngineResult& primary = result.chi ? *result.chi : *result.fock;
  result.p_noclick_stage1 = primary.p_noclick_stage1;
  result.p_click_stage2_given_stage1 = primary.p_click_stage2_given_stage1;
  result.p_success = primary.p_success;
  result.beta_star = primary.beta_star;
  result.fidelity_star = primary.fidelity_star;
  result.fidelity_at_target = primary.fidelity_at_target;
  result.gain_amp = primary.beta_star / cfg.alpha;
  result.gain_intensity = result.gain_amp * result.gain_amp;

  if (result.chi && result.fock) {
    result.engine_max_deviation = max_deviation(*result.chi, *result.fock);
    result.engines_agree = result.engine_max_deviation <= cfg.agreement_tolerance;
  }
  return result;
}

Setup cat_setup(const PipelineConfig& cfg, Parity target_parity) {
  const states::CatSpec cat(cfg.alpha, cfg.parity);
  const double s = cfg.resolved_squeezing();
  Setup setup{
      states::cat_chi(cat),
      states::squeezed_vacuum_chi(s),
      [cat](int dim) { return states::cat_fock(cat, dim); },
      [s](int dim) { return states::squeezed_vacuum_fock(s, dim); },
      [target_parity](double beta) {
        return states::cat_chi(states::CatSpec(beta, target_parity));
      },
      [target_parity](double beta, int dim) {
        return states::cat_fock(states::CatSpec(beta, target_parity), dim);
      },
      target_parity == Parity::odd ? 1e-9 : 0.0,
  };
  return setup;
}

}  // namespace

double PipelineConfig::r2() const { return std::sqrt(std::max(0.0, 1.0 - t2 * t2)); }

double PipelineConfig::resolved_squeezing() const {
  if (input == InputKind::coherent) return 0.0;
  return squeezing ? *squeezing : states::optimal_squeezing(alpha).s;
}

Parity PipelineConfig::target_parity() const {
  return same_parity_target ? parity : opposite(parity);
}

void PipelineConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) config_error("alpha", "must be positive");
  if (squeezing && (!std::isfinite(*squeezing) || std::abs(*squeezing) > 2.0)) {
    config_error("squeezing", "must satisfy |s| <= 2");
  }
  if (!(t1 >= 0.0 && r1 >= 0.0) || std::abs(t1 * t1 + r1 * r1 - 1.0) > 1e-12) {
    config_error("t1", "t1^2 + r1^2 must equal 1 with non-negative coefficients");
  }
  if (!(r1 > 0.0)) config_error("r1", "must be positive");
  if (!(t2 > 0.0 && t2 < 1.0)) config_error("t2", "must lie in (0, 1)");
  if (!in_unit_interval(eta1)) config_error("eta1", "must lie in (0, 1]");
  if (!in_unit_interval(eta2)) config_error("eta2", "must lie in (0, 1]");
  if (truncation && (*truncation < 10 || *truncation > kMaxDim)) {
    config_error("truncation", "must lie in [10, 300]");
  }
  if (target_beta && !(*target_beta > 0.0)) config_error("target_beta", "must be positive");
  if (!(probability_floor >= 0.0)) config_error("probability_floor", "must be non-negative");
}

namespace {

// Golden-section search stalls once fidelity differences drop below rounding
// noise, which leaves beta* uncertain at the 1e-5 level on flat maxima. A
// least-squares quartic over a wider window averages the noise out.
void polish(const std::function<double(double)>& fidelity, double lo,
            const OptimizerOptions& options, GainOptimum& out) {
  const int k = options.polish_points / 2;
  const double half = std::min(options.polish_halfwidth, out.beta_star - lo);
  if (k < 3 || !(half > 0.0)) return;
  const int n = 2 * k + 1;
  Eigen::MatrixXd design(n, 5);
  Eigen::VectorXd values(n);
  for (int j = 0; j < n; ++j) {
    const double u = static_cast<double>(j - k) / k;
    double power = 1.0;
    for (int c = 0; c < 5; ++c, power *= u) design(j, c) = power;
    values(j) = fidelity(out.beta_star + u * half);
  }
  const Eigen::VectorXd c = design.colPivHouseholderQr().solve(values);
  double u = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double d1 = c(1) + 2 * c(2) * u + 3 * c(3) * u * u + 4 * c(4) * u * u * u;
    const double d2 = 2 * c(2) + 6 * c(3) * u + 12 * c(4) * u * u;
    if (!(d2 < 0.0)) return;
    const double step = d1 / d2;
    u -= step;
    if (std::abs(u) > 0.5) return;
    if (std::abs(step) < 1e-15) break;
  }
  const double beta = out.beta_star + u * half;
  const double f = fidelity(beta);
  // Reject only a clearly worse point; differences below 1e-9 are noise.
  if (f < out.fidelity_star - 1e-9) return;
  out.beta_star = beta;
  out.fidelity_star = f;
}

}  // namespace

GainOptimum maximize_fidelity(const std::function<double(double)>& fidelity, double alpha,
                              double beta_min, const OptimizerOptions& options) {
  const double lo = std::max(alpha / 2.0, beta_min);
  const double hi = 3.0 * alpha + 0.5;
  if (!(hi > lo)) throw DomainError("maximize_fidelity: empty search interval");
  const int n = std::max(options.coarse_points, 3);

  GainOptimum out{0.0, -std::numeric_limits<double>::infinity(), {}};
  out.scan.reserve(n);
  int best = 0;
  for (int k = 0; k < n; ++k) {
    const double beta = lo + (hi - lo) * k / (n - 1);
    const double f = fidelity(beta);
    out.scan.emplace_back(beta, f);
    if (f > out.scan[best].second) best = k;
  }
  if (best == 0 || best == n - 1) {
    std::ostringstream os;
    os << "fidelity maximum at the edge of [" << lo << ", " << hi << "] (beta = "
       << out.scan[best].first << ")";
    throw BracketError(os.str(), out.scan);
  }

  constexpr double kInvPhi = 0.61803398874989484820;
  double a = out.scan[best - 1].first;
  double b = out.scan[best + 1].first;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fidelity(c);
  double fd = fidelity(d);
  while (b - a > options.tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fidelity(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fidelity(d);
    }
  }
  out.beta_star = 0.5 * (a + b);
  out.fidelity_star = fidelity(out.beta_star);
  polish(fidelity, lo, options, out);
  return out;
}

PipelineResult run_parity_swap(const PipelineConfig& config, const OptimizerOptions& options) {
  config.validate();
  if (config.input != InputKind::cat) throw ConfigError("input: parity swap needs a cat input");
  const Parity target = config.target_parity();
  return execute(config, cat_setup(config, target), target, options);
}

PipelineResult run_coherent_scamp(double alpha, GuessSign guess, PipelineConfig config,
                                  const OptimizerOptions& options) {
  config.input = InputKind::coherent;
  config.alpha = alpha;
  config.guess = guess;
  if (!config.target_beta) config.target_beta = alpha / config.r1;
  config.validate();

  const double beta_guess = (guess == GuessSign::correct ? 1.0 : -1.0) * config.t1 * alpha / config.r1;
  Setup setup{
      states::coherent_chi(alpha),
      states::coherent_chi(beta_guess),
      [alpha](int dim) { return states::coherent_fock(alpha, dim); },
      [beta_guess](int dim) { return states::coherent_fock(beta_guess, dim); },
      [](double beta) { return states::coherent_chi(beta); },
      [](double beta, int dim) { return states::coherent_fock(beta, dim); },
      0.0,
  };
  return execute(config, setup, config.parity, options);
}

PipelineResult run(const PipelineConfig& config, const OptimizerOptions& options) {
  if (config.input == InputKind::coherent) {
    return run_coherent_scamp(config.alpha, config.guess, config, options);
  }
  return run_parity_swap(config, options);
}

GainOptimum optimize_gain(const PipelineConfig& config, Parity target_parity,
                          const OptimizerOptions& options) {
  config.validate();
  PipelineConfig cfg = config;
  cfg.engine = config.engine == Engine::fock ? Engine::fock : Engine::chi;
  const Setup setup = cat_setup(cfg, target_parity);
  if (cfg.engine == Engine::chi) {
    const auto run = run_chi(cfg, setup, options);
    if (!run.output) throw NegligibleEventError("no heralded output", run.result.p_success);
    return maximize_fidelity(
        [&](double beta) { return ps::overlap(setup.chi_target(beta), *run.output); }, cfg.alpha,
        setup.beta_min, options);
  }
  const auto run = run_fock(cfg, setup, options);
  if (!run.output) throw NegligibleEventError("no heralded output", run.result.p_success);
  return maximize_fidelity(
      [&](double beta) { return fock::fidelity_fock(setup.fock_target(beta, run.dim), *run.output); },
      cfg.alpha, setup.beta_min, options);
}

std::vector<IdealGainRow> ideal_gain_curve(const std::vector<double>& alphas, double r1,
                                           std::optional<double> t2,
                                           const OptimizerOptions& options) {
  if (!(r1 > 0.0 && r1 <= 1.0)) throw DomainError("ideal_gain_curve: r1 must lie in (0, 1]");
  std::vector<IdealGainRow> rows;
  rows.reserve(alphas.size());
  for (const double alpha : alphas) {
    if (!(alpha > 0.0)) throw DomainError("ideal_gain_curve: alpha must be positive");
    const double s = states::optimal_squeezing(alpha).s;
    const auto channel = states::comparison_channel_params(alpha, s, r1);

    int dim = 80;
    std::optional<fock::FockVector> subtracted;
    while (!subtracted) {
      try {
        subtracted = states::subtracted_squeezed_cat(channel.alpha_prime, Parity::even,
                                                     channel.s_prime, dim);
      } catch (const TruncationError& e) {
        if (e.suggested_dim() > kMaxDim) throw;
        dim = e.suggested_dim();
      }
    }
    const auto fidelity = [&](double beta) {
      return fock::overlap(states::cat_fock(states::CatSpec(beta, Parity::odd), dim), *subtracted);
    };
    const auto opt = maximize_fidelity(fidelity, alpha, 1e-9, options);

    IdealGainRow row{alpha, s, channel.s_prime, channel.alpha_prime, opt.beta_star,
                     opt.beta_star / alpha, std::numeric_limits<double>::quiet_NaN()};
    if (t2) {
      PipelineConfig cfg;
      cfg.alpha = alpha;
      cfg.parity = Parity::even;
      cfg.r1 = r1;
      cfg.t1 = std::sqrt(1.0 - r1 * r1);
      cfg.t2 = *t2;
      row.pipeline_gain_amp = run_parity_swap(cfg, options).gain_amp;
    }
    rows.push_back(row);
  }
  return rows;
}

WignerReport wigner_report(const PipelineConfig& config, const ps::QuadratureGrid& grid,
                           const OptimizerOptions& options) {
  PipelineConfig cfg = config;
  cfg.engine = Engine::chi;
  const PipelineResult result = run(cfg, options);
  if (!result.chi_output) throw NegligibleEventError("no heralded output", result.p_success);
  const auto ideal = cfg.input == InputKind::coherent
                         ? states::coherent_chi(result.beta_star)
                         : states::cat_chi(states::CatSpec(result.beta_star, result.target_parity));
  WignerReport report{ps::wigner(*result.chi_output, grid), ps::wigner(ideal, grid),
                      result.beta_star, 0.0, 0.0, 0.0};
  report.min_output = report.output.minimum();
  report.min_ideal = report.ideal.minimum();
  report.ratio = report.min_output / report.min_ideal;
  return report;
}

}  // namespace scamp::pipeline
