// Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include "scamp/audit.hpp"
#include "scamp/phase_space.hpp"
#include "scamp/pipeline.hpp"
#include "scamp/states.hpp"
#include "scamp/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace scamp;
using namespace scamp::pipeline;

namespace {

std::string fmt(double v) { return sweep::format_number(v); }

struct Criterion {
  int id;
  std::string title;
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    detail << (detail.tellp() > 0 ? "; " : "") << (ok ? "" : "MISS ") << what;
  }
};

int failures = 0;

void report(Criterion& c) {
  std::printf("%s criterion %d %s: %s\n", c.passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
              c.detail.str().c_str());
  std::fflush(stdout);
  if (!c.passed) ++failures;
}

template <typename Body>
void criterion(int id, const std::string& title, Body body) {
  Criterion c{id, title};
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(c);
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

PipelineConfig config(double alpha, Parity parity, double t2, double eta) {
  PipelineConfig c;
  c.alpha = alpha;
  c.parity = parity;
  c.t2 = t2;
  c.eta1 = c.eta2 = eta;
  return c;
}

const double kT95 = std::sqrt(0.95);
const double kT99 = std::sqrt(0.99);

}  // namespace

int main() {
  criterion(1, "headline operating point", [](Criterion& c) {
    // The input parity is unknown to the operator, so both parities are
    // equally likely; the figures of merit are averaged over them.
    double f_sum = 0.0, p_sum = 0.0;
    for (const Parity p : {Parity::even, Parity::odd}) {
      auto cfg = config(1.1, p, kT95, 0.8);
      cfg.target_beta = 1.5;
      const auto r = run_parity_swap(cfg);
      f_sum += *r.fidelity_at_target;
      p_sum += r.p_success;
      c.detail << (c.detail.tellp() > 0 ? "; " : "") << to_string(p) << " F(1.5)=" << fmt(*r.fidelity_at_target)
               << " P_S=" << fmt(r.p_success);
    }
    const double f = f_sum / 2, ps = p_sum / 2;
    c.require(within(f, 0.87, 0.02), "parity-averaged F(1.5)=" + fmt(f) + " in 0.87+-0.02");
    c.require(within(ps, 0.03, 0.01), "parity-averaged P_S=" + fmt(ps) + " in 0.03+-0.01");
  });

  criterion(2, "optimal targets at alpha=1", [](Criterion& c) {
    const auto even = run_parity_swap(config(1.0, Parity::even, kT95, 0.8));
    const auto odd = run_parity_swap(config(1.0, Parity::odd, kT95, 0.8));
    c.require(within(even.beta_star, 1.42, 0.05), "even beta*=" + fmt(even.beta_star) + " in 1.42+-0.05");
    c.require(within(even.fidelity_star, 0.91, 0.02), "even F*=" + fmt(even.fidelity_star) + " in 0.91+-0.02");
    c.require(within(odd.beta_star, 1.31, 0.05), "odd beta*=" + fmt(odd.beta_star) + " in 1.31+-0.05");
    c.require(within(odd.fidelity_star, 0.91, 0.02), "odd F*=" + fmt(odd.fidelity_star) + " in 0.91+-0.02");
  });

  criterion(3, "optimal squeezing in dB", [](Criterion& c) {
    const double d1 = states::optimal_squeezing(1.0).decibels();
    const double d2 = states::optimal_squeezing(2.0).decibels();
    c.require(within(d1, 6.3, 0.1), "alpha=1 " + fmt(d1) + " dB in 6.3+-0.1");
    c.require(within(d2, 12.1, 0.2), "alpha=2 " + fmt(d2) + " dB in 12.1+-0.2");
  });

  criterion(4, "gain plateau and efficiency independence", [](Criterion& c) {
    const double root2 = std::sqrt(2.0);
    double lo = 1e9, hi = -1e9;
    std::string worst;
    for (const Parity p : {Parity::even, Parity::odd}) {
      for (int k = 0; k <= 8; ++k) {
        const double a = 0.5 + 0.125 * k;
        const double g = run_parity_swap(config(a, p, kT99, 1.0)).gain_amp;
        if (std::abs(g / root2 - 1.0) > 0.1) {
          worst += " " + std::string(to_string(p)) + "@" + fmt(a) + "=" + fmt(g);
        }
        lo = std::min(lo, g);
        hi = std::max(hi, g);
      }
    }
    c.require(worst.empty(), "gain in [" + fmt(lo) + ", " + fmt(hi) + "] vs sqrt2 band [" +
                                 fmt(0.9 * root2) + ", " + fmt(1.1 * root2) + "]" +
                                 (worst.empty() ? "" : ", outside:" + worst));

    const double tol = 1e-6;  // optimizer tolerance in beta
    double spread_max = 0.0;
    for (const Parity p : {Parity::even, Parity::odd}) {
      for (const double a : {0.5, 1.0, 1.5}) {
        double bmin = 1e9, bmax = -1e9;
        for (const double eta : {0.6, 0.8, 1.0}) {
          const double b = run_parity_swap(config(a, p, kT99, eta)).beta_star;
          bmin = std::min(bmin, b);
          bmax = std::max(bmax, b);
        }
        spread_max = std::max(spread_max, bmax - bmin);
      }
    }
    c.require(spread_max <= tol, "max beta* spread over eta in {0.6,0.8,1}=" + fmt(spread_max) +
                                     " <= " + fmt(tol));
  });

  criterion(5, "coherent-state amplifier baseline", [](Criterion& c) {
    PipelineConfig cfg;
    cfg.t2 = kT99;
    const auto r = run_coherent_scamp(1.0, GuessSign::correct, cfg);
    c.require(std::abs(r.p_noclick_stage1 - 1.0) <= 1e-10,
              "P(no click)=" + fmt(r.p_noclick_stage1) + " within 1e-10 of 1");
    c.require(*r.fidelity_at_target >= 0.999,
              "F(|sqrt2 alpha>)=" + fmt(*r.fidelity_at_target) + " >= 0.999");
  });

  criterion(6, "cross-engine equivalence", [](Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::string at;
    int points = 0, dim_max = 0;
    for (const double a : {0.25, 0.5625, 0.875, 1.1875, 1.5}) {
      for (const bool squeezed : {false, true}) {
        for (const Parity p : {Parity::even, Parity::odd}) {
          for (const double eta : {0.8, 1.0}) {
            auto cfg = config(a, p, kT95, eta);
            if (!squeezed) cfg.squeezing = 0.0;
            cfg.engine = Engine::both;
            const auto r = run_parity_swap(cfg);
            ++points;
            dim_max = std::max(dim_max, r.fock_dim);
            if (!(r.engine_max_deviation <= worst)) {
              worst = r.engine_max_deviation;
              at = "alpha=" + fmt(a) + (squeezed ? " s=opt " : " s=0 ") + std::string(to_string(p)) +
                   " eta=" + fmt(eta);
            }
          }
        }
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(worst <= 1e-6, std::to_string(points) + " points, max deviation " + fmt(worst) + " at " + at +
                                 " (Fock dim up to " + std::to_string(dim_max) + ")");
    c.require(secs <= 300.0, "runtime " + fmt(secs) + " s");
  });

  criterion(7, "comparison channel closed form", [](Criterion& c) {
    std::mt19937_64 rng(1234567);
    std::uniform_real_distribution<double> ua(0.1, 1.5), us(-1.2, 0.4), ur(0.15, 0.95);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double a = ua(rng), s = us(rng), r1 = ur(rng), t1 = std::sqrt(1 - r1 * r1);
      const auto mixed = phase_space::substitute_beamsplitter(
          phase_space::tensor(states::coherent_chi(a), states::squeezed_vacuum_chi(s)), 0, 1, t1, r1);
      const auto out = phase_space::condition(mixed, 0, phase_space::DetectorPovm(1.0, Outcome::no_click)).state;
      const auto cp = states::comparison_channel_params(a, s, r1);
      worst = std::max(worst, 1.0 - phase_space::overlap(states::squeezed_coherent_chi(cp.s_prime, cp.alpha_prime), out));
    }
    c.require(worst <= 1e-8, "20 random points, max 1-F=" + fmt(worst));
  });

  criterion(8, "parity swap", [](Criterion& c) {
    for (const Parity p : {Parity::even, Parity::odd}) {
      for (const double a : {0.25, 0.5, 1.0, 1.5}) {
        auto cfg = config(a, p, kT99, 1.0);
        cfg.engine = Engine::fock;
        const auto r = run_parity_swap(cfg);
        const double pop = r.fock_output->parity_population(opposite(p));
        c.require(pop >= 0.99, std::string(to_string(p)) + "@" + fmt(a) + " " + fmt(pop));
      }
    }
  });

  criterion(9, "wigner negativity", [](Criterion& c) {
    const auto odd = wigner_report(config(1.0, Parity::odd, kT95, 0.8), {});
    const auto even = wigner_report(config(1.0, Parity::even, kT95, 0.8), {});
    c.require(odd.ratio >= 0.3 && odd.ratio <= 0.7, "odd input ratio " + fmt(odd.ratio) + " in [0.3, 0.7]");
    c.require(even.ratio >= 0.7 && even.ratio <= 1.3, "even input ratio " + fmt(even.ratio) + " in [0.7, 1.3]");
  });

  criterion(10, "property suites", [](Criterion& c) {
    const auto r = audit::run_all();
    std::string failed;
    for (const auto& chk : r.checks) {
      if (!chk.passed && chk.category != audit::Category::known_discrepancy) failed += " " + chk.suite + "/" + chk.name;
    }
    c.require(r.ok(), std::to_string(r.checks.size()) + " checks, " + std::to_string(r.failures()) + " failed" +
                          (failed.empty() ? "" : ":" + failed));
    c.require(r.failures(true) > r.failures(false),
              std::to_string(r.failures(true) - r.failures(false)) + " known closed-form discrepancies reported");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
