#include "doctest.h"

#include "scamp/errors.hpp"
#include "scamp/pipeline.hpp"
#include "scamp/states.hpp"

#include <cmath>
#include <string>

using namespace scamp;
using namespace scamp::pipeline;

namespace {

PipelineConfig paper_config(double alpha, Parity parity) {
  PipelineConfig c;
  c.alpha = alpha;
  c.parity = parity;
  c.eta1 = c.eta2 = 0.8;
  return c;
}

std::string config_message(PipelineConfig c) {
  try {
    c.validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config validation names the field") {
  PipelineConfig c;
  c.eta1 = 1.3;
  CHECK(config_message(c).rfind("eta1:", 0) == 0);
  c = {};
  c.eta2 = 0.0;
  CHECK(config_message(c).rfind("eta2:", 0) == 0);
  c = {};
  c.t2 = 1.0;
  CHECK(config_message(c).rfind("t2:", 0) == 0);
  c = {};
  c.t1 = 0.5;
  CHECK(config_message(c).rfind("t1:", 0) == 0);
  c = {};
  c.alpha = -1.0;
  CHECK(config_message(c).rfind("alpha:", 0) == 0);
  CHECK(config_message(PipelineConfig{}).empty());
  CHECK(PipelineConfig{}.r2() == doctest::Approx(std::sqrt(0.05)));
}

TEST_CASE("optimizer on a known landscape") {
  const auto f = [](double b) { return 1.0 - (b - 1.234) * (b - 1.234); };
  const auto opt = maximize_fidelity(f, 1.0, 0.0);
  CHECK(opt.beta_star == doctest::Approx(1.234).epsilon(1e-9));
  CHECK(opt.scan.size() == 64);
  CHECK(opt.scan.front().first == doctest::Approx(0.5));
  CHECK(opt.scan.back().first == doctest::Approx(3.5));
  const auto rising = [](double b) { return b; };
  CHECK_THROWS_AS(maximize_fidelity(rising, 1.0, 0.0), BracketError);
  try {
    maximize_fidelity(rising, 1.0, 0.0);
  } catch (const BracketError& e) {
    CHECK(e.scan().size() == 64);
  }
}

TEST_CASE("probabilities and bookkeeping") {
  for (const Parity p : {Parity::even, Parity::odd}) {
    const auto r = run_parity_swap(paper_config(1.0, p));
    CHECK(r.target_parity == opposite(p));
    CHECK(r.p_noclick_stage1 > 0.0);
    CHECK(r.p_noclick_stage1 <= 1.0);
    CHECK(r.p_click_stage2_given_stage1 > 0.0);
    CHECK(r.p_click_stage2_given_stage1 <= 1.0);
    CHECK(std::abs(r.p_success - r.p_noclick_stage1 * r.p_click_stage2_given_stage1) < 1e-12);
    CHECK(r.gain_amp == doctest::Approx(r.beta_star));
    CHECK(r.gain_intensity == doctest::Approx(r.beta_star * r.beta_star));
  }
}

TEST_CASE("paper operating points") {
  auto even = paper_config(1.0, Parity::even);
  even.engine = Engine::both;
  const auto re = run_parity_swap(even);
  CHECK(re.engines_agree.value());
  CHECK(re.beta_star == doctest::Approx(1.419435031339).epsilon(1e-8));
  CHECK(re.fidelity_star == doctest::Approx(0.910377691055).epsilon(1e-9));
  const auto ro = run_parity_swap(paper_config(1.0, Parity::odd));
  CHECK(ro.beta_star == doctest::Approx(1.314493903468).epsilon(1e-8));
  CHECK(ro.fidelity_star == doctest::Approx(0.912381349314).epsilon(1e-9));
}

TEST_CASE("near-unity fidelity at small amplitude") {
  PipelineConfig c;
  c.alpha = 0.05;
  c.t2 = std::sqrt(0.99);
  const auto r = run_parity_swap(c);
  CHECK(r.fidelity_star > 0.99);
  CHECK(r.beta_star > 0.0);
}

TEST_CASE("coherent-state amplifier") {
  PipelineConfig c;
  c.t2 = std::sqrt(0.99);
  c.engine = Engine::both;
  const auto right = run_coherent_scamp(1.0, GuessSign::correct, c);
  CHECK(std::abs(right.p_noclick_stage1 - 1.0) < 1e-10);
  CHECK(*right.fidelity_at_target >= 0.999);
  CHECK(right.engines_agree.value());

  const auto wrong = run_coherent_scamp(1.0, GuessSign::wrong, c);
  CHECK(wrong.chi->p_noclick_stage1 == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
  CHECK(wrong.fock->p_noclick_stage1 == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
  // The leaked light is gone and the output mode holds vacuum: nothing to subtract.
  CHECK(wrong.p_click_stage2_given_stage1 < 1e-12);
  CHECK(std::isnan(wrong.beta_star));
  CHECK_FALSE(wrong.chi_output.has_value());

  c.eta1 = 0.6;
  const auto lossy = run_coherent_scamp(1.0, GuessSign::wrong, c);
  CHECK(lossy.p_noclick_stage1 == doctest::Approx(std::exp(-0.6 * 2.0)).epsilon(1e-10));
}

TEST_CASE("fixed truncation too small for the input") {
  auto c = paper_config(1.0, Parity::even);
  c.engine = Engine::fock;
  c.truncation = 40;
  CHECK_THROWS_AS(run_parity_swap(c), TruncationError);
  try {
    run_parity_swap(c);
  } catch (const TruncationError& e) {
    CHECK(e.suggested_dim() == 60);
  }
  c.truncation = 60;
  CHECK_NOTHROW(run_parity_swap(c));
}

TEST_CASE("success probability grows with amplitude and reflectivity") {
  const double alphas[] = {0.5, 0.75, 1.0, 1.25, 1.5};
  const double t2sq[] = {0.99, 0.97, 0.95, 0.925, 0.9};
  double grid[5][5];
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      auto c = paper_config(alphas[i], Parity::even);
      c.t2 = std::sqrt(t2sq[j]);
      grid[i][j] = run_parity_swap(c).p_success;
    }
  }
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i > 0) CHECK(grid[i][j] >= grid[i - 1][j]);
      if (j > 0) CHECK(grid[i][j] >= grid[i][j - 1]);
    }
  }
}

TEST_CASE("even and odd inputs behave almost symmetrically") {
  for (const double a : {0.5, 0.75, 1.0, 1.25, 1.5}) {
    const double fe = run_parity_swap(paper_config(a, Parity::even)).fidelity_star;
    const double fo = run_parity_swap(paper_config(a, Parity::odd)).fidelity_star;
    CHECK(std::abs(fe - fo) < 0.05);
  }
}

TEST_CASE("same-parity target is available for diagnostics") {
  auto c = paper_config(1.0, Parity::even);
  c.same_parity_target = true;
  const auto r = run_parity_swap(c);
  CHECK(r.target_parity == Parity::even);
  CHECK(r.fidelity_star < 0.1);
}

TEST_CASE("ideal gain from exact photon subtraction") {
  const auto rows = ideal_gain_curve({0.5, 1.0, 1.5}, std::sqrt(0.5), std::sqrt(0.99));
  const double frozen[] = {1.564545887961, 1.468850657715, 1.418944273333};
  for (int i = 0; i < 3; ++i) {
    CHECK(rows[i].gain_amp == doctest::Approx(frozen[i]).epsilon(1e-8));
    CHECK(std::abs(rows[i].gain_amp - rows[i].pipeline_gain_amp) < 0.05);
  }
  CHECK(rows[1].s_prime == doctest::Approx(-0.319458259481).epsilon(1e-10));
  CHECK(std::isnan(ideal_gain_curve({1.0}, std::sqrt(0.5)).front().pipeline_gain_amp));
}

TEST_CASE("wigner report") {
  const auto odd = wigner_report(paper_config(1.0, Parity::odd), {});
  CHECK(odd.ratio == doctest::Approx(0.592624).epsilon(1e-5));
  CHECK(odd.ideal.values.minCoeff() == doctest::Approx(odd.min_ideal));
  // The ideal target of an odd input is an even cat: positive at the origin.
  const phase_space::QuadratureGrid origin{0.0, 0.0, 0.0, 0.0, 1.0};
  CHECK(wigner_report(paper_config(1.0, Parity::odd), origin).ideal.values(0, 0) > 0.0);
  CHECK(wigner_report(paper_config(1.0, Parity::even), origin).ideal.values(0, 0) < 0.0);
}
