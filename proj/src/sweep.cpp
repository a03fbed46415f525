#include "scamp/sweep.hpp"

#include "scamp/errors.hpp"
#include "scamp/states.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace scamp::sweep {

namespace {

using pipeline::Engine;
using pipeline::PipelineConfig;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad(std::string_view key, const std::string& message) {
  throw ConfigError(std::string(key) + ": " + message);
}

double parse_real(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    bad(key, "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view key, std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    bad(key, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  bad(key, "expected true or false, got '" + std::string(text) + "'");
}

Parity parse_parity(std::string_view key, std::string_view text) {
  if (text == "even" || text == "+") return Parity::even;
  if (text == "odd" || text == "-") return Parity::odd;
  bad(key, "expected even or odd, got '" + std::string(text) + "'");
}

std::string quote_csv(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

struct Row {
  std::vector<double> values;
  std::string parity;  // pipeline figures only
  std::string error;
};

void write_row(std::ostream& out, Figure figure, const Row& row) {
  const auto& cols = columns(figure);
  std::size_t v = 0;
  for (std::size_t c = 0; c + 1 < cols.size(); ++c) {
    if (c > 0) out << ',';
    if (cols[c] == "parity") {
      out << row.parity;
    } else {
      out << format_number(row.values.at(v++));
    }
  }
  out << ',' << quote_csv(row.error) << '\n';
}

bool is_pipeline_figure(Figure f) {
  return f == Figure::gain || f == Figure::fidelity || f == Figure::probability;
}

// Runs body(i) for i in [0, n) on a small pool; each index is written once.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct PipelinePoint {
  double alpha;
  Parity parity;
  double t2;
  double eta;
};

Row pipeline_row(const SweepSpec& spec, const PipelinePoint& pt) {
  Row row;
  row.parity = std::string(to_string(pt.parity));
  row.values = {pt.alpha, pt.t2, pt.eta, kNaN, kNaN, kNaN, kNaN, kNaN};
  try {
    PipelineConfig cfg = spec.base;
    cfg.input = pipeline::InputKind::cat;
    cfg.alpha = pt.alpha;
    cfg.parity = pt.parity;
    cfg.t2 = pt.t2;
    cfg.eta1 = pt.eta;
    cfg.eta2 = pt.eta;
    if (cfg.engine == Engine::both) cfg.engine = Engine::chi;
    const auto r = pipeline::run_parity_swap(cfg);
    row.values[3] = r.beta_star;
    row.values[4] = r.gain_amp;
    row.values[5] = r.gain_intensity;
    row.values[6] = r.fidelity_star;
    row.values[7] = r.p_success;
    if (std::isnan(r.beta_star)) row.error = "no heralded output";
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

Row squeezing_row(double alpha) {
  const auto s = states::optimal_squeezing(alpha);
  return {{alpha, s.s, s.decibels()}, {}, {}};
}

Row squeeze_fidelity_row(double alpha) {
  const double s = states::optimal_squeezing(alpha).s;
  return {{alpha, s, states::cat_squeezed_overlap(alpha, s)}, {}, {}};
}

Row ideal_gain_row(const SweepSpec& spec, double alpha) {
  Row row{{alpha, kNaN, kNaN, kNaN, kNaN, kNaN}, {}, {}};
  try {
    const auto r = pipeline::ideal_gain_curve({alpha}, spec.base.r1).front();
    row.values = {r.alpha, r.s, r.s_prime, r.alpha_prime, r.beta_star, r.gain_amp};
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

void apply_setting(PipelineConfig& c, std::string_view key, std::string_view value) {
  if (key == "input") {
    if (value == "cat") c.input = pipeline::InputKind::cat;
    else if (value == "coherent") c.input = pipeline::InputKind::coherent;
    else bad(key, "expected cat or coherent, got '" + std::string(value) + "'");
  } else if (key == "alpha") {
    c.alpha = parse_real(key, value);
  } else if (key == "parity") {
    c.parity = parse_parity(key, value);
  } else if (key == "squeezing") {
    if (value == "auto") c.squeezing.reset();
    else c.squeezing = parse_real(key, value);
  } else if (key == "guess") {
    if (value == "correct") c.guess = pipeline::GuessSign::correct;
    else if (value == "wrong") c.guess = pipeline::GuessSign::wrong;
    else bad(key, "expected correct or wrong, got '" + std::string(value) + "'");
  } else if (key == "r1") {
    const double r1 = parse_real(key, value);
    if (!(r1 > 0.0 && r1 <= 1.0)) bad(key, "must lie in (0, 1]");
    c.r1 = r1;
    c.t1 = std::sqrt(1.0 - r1 * r1);
  } else if (key == "t2") {
    c.t2 = parse_real(key, value);
  } else if (key == "eta") {
    c.eta1 = c.eta2 = parse_real(key, value);
  } else if (key == "eta1") {
    c.eta1 = parse_real(key, value);
  } else if (key == "eta2") {
    c.eta2 = parse_real(key, value);
  } else if (key == "engine") {
    if (value == "chi") c.engine = Engine::chi;
    else if (value == "fock") c.engine = Engine::fock;
    else if (value == "both") c.engine = Engine::both;
    else bad(key, "expected chi, fock or both, got '" + std::string(value) + "'");
  } else if (key == "truncation") {
    c.truncation = parse_int(key, value);
  } else if (key == "target_beta") {
    c.target_beta = parse_real(key, value);
  } else if (key == "same_parity_target") {
    c.same_parity_target = parse_bool(key, value);
  } else {
    bad(key, "unknown key");
  }
}

PipelineConfig parse_config(std::istream& in, const std::string& source, PipelineConfig base,
                            std::vector<std::string>* keys) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    const std::string where = source + ":" + std::to_string(number) + ": ";
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected key = value, got '" + std::string(view) + "'");
    }
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    try {
      apply_setting(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
    if (keys) keys->emplace_back(key);
  }
  return base;
}

PipelineConfig load_config(const std::string& path, PipelineConfig base,
                           std::vector<std::string>* keys) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_config(in, path, std::move(base), keys);
}

Grid Grid::parse(std::string_view text) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(parse_real("grid", trim(text.substr(start, colon - start))));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3) bad("grid", "expected MIN:MAX:STEP");
  Grid g{parts[0], parts[1], parts[2]};
  if (!(g.step > 0.0) || !std::isfinite(g.step)) bad("grid", "step must be positive");
  if (!(g.max >= g.min)) bad("grid", "empty grid (MAX below MIN)");
  return g;
}

std::vector<double> Grid::points() const {
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = min + static_cast<double>(k) * step;
  return out;
}

FigureId parse_figure(std::string_view t) {
  if (t == "3a" || t == "squeezing") return {Figure::squeezing, std::nullopt};
  if (t == "3b" || t == "squeeze_fidelity") return {Figure::squeeze_fidelity, std::nullopt};
  if (t == "gain") return {Figure::gain, std::nullopt};
  if (t == "4a") return {Figure::gain, Parity::even};
  if (t == "4b") return {Figure::gain, Parity::odd};
  if (t == "fidelity") return {Figure::fidelity, std::nullopt};
  if (t == "5a") return {Figure::fidelity, Parity::even};
  if (t == "5b") return {Figure::fidelity, Parity::odd};
  if (t == "probability") return {Figure::probability, std::nullopt};
  if (t == "6a") return {Figure::probability, Parity::even};
  if (t == "6b") return {Figure::probability, Parity::odd};
  if (t == "9" || t == "ideal_gain") return {Figure::ideal_gain, std::nullopt};
  bad("figure", "unknown figure id '" + std::string(t) + "'");
}

const std::vector<std::string>& columns(Figure figure) {
  static const std::vector<std::string> pipeline_cols{
      "alpha",          "parity",   "t2",        "eta",  "beta_star", "gain_amp",
      "gain_intensity", "fidelity", "p_success", "error"};
  static const std::vector<std::string> squeezing_cols{"alpha", "s", "s_db", "error"};
  static const std::vector<std::string> squeeze_fidelity_cols{"alpha", "s", "fidelity", "error"};
  static const std::vector<std::string> ideal_cols{"alpha",       "s",         "s_prime",
                                                   "alpha_prime", "beta_star", "gain_amp",
                                                   "error"};
  switch (figure) {
    case Figure::squeezing: return squeezing_cols;
    case Figure::squeeze_fidelity: return squeeze_fidelity_cols;
    case Figure::ideal_gain: return ideal_cols;
    default: return pipeline_cols;
  }
}

void write_sweep(const SweepSpec& spec, std::ostream& out) {
  const Figure figure = spec.id.figure;
  const auto alphas = spec.alpha.points();
  if (alphas.empty()) bad("grid", "empty grid");

  std::vector<PipelinePoint> points;
  if (is_pipeline_figure(figure)) {
    if (spec.t2_values.empty()) bad("t2", "no values to sweep");
    if (spec.eta_values.empty()) bad("eta", "no values to sweep");
    std::vector<Parity> parities{Parity::even, Parity::odd};
    if (spec.id.parity) parities = {*spec.id.parity};
    for (const double a : alphas)
      for (const Parity p : parities)
        for (const double t2 : spec.t2_values)
          for (const double eta : spec.eta_values) points.push_back({a, p, t2, eta});
  }
  const std::size_t n = is_pipeline_figure(figure) ? points.size() : alphas.size();

  std::vector<Row> rows(n);
  parallel_for(n, spec.threads, [&](std::size_t i) {
    switch (figure) {
      case Figure::squeezing: rows[i] = squeezing_row(alphas[i]); break;
      case Figure::squeeze_fidelity: rows[i] = squeeze_fidelity_row(alphas[i]); break;
      case Figure::ideal_gain: rows[i] = ideal_gain_row(spec, alphas[i]); break;
      default: rows[i] = pipeline_row(spec, points[i]); break;
    }
  });

  const auto& cols = columns(figure);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const auto& row : rows) write_row(out, figure, row);
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_record(const pipeline::PipelineResult& r, std::ostream& out) {
  const auto& c = r.config;
  const auto engine = c.engine == Engine::chi ? "chi" : c.engine == Engine::fock ? "fock" : "both";
  const auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : "na"; };
  const auto engine_value = [](const std::optional<pipeline::EngineResult>& e, double pipeline::EngineResult::*field) {
    return e ? format_number((*e).*field) : std::string("na");
  };
  out << "input=" << (c.input == pipeline::InputKind::cat ? "cat" : "coherent") << '\n'
      << "alpha=" << format_number(c.alpha) << '\n'
      << "parity=" << to_string(c.parity) << '\n'
      << "squeezing=" << format_number(r.squeezing) << '\n'
      << "squeezing_db=" << format_number(states::SqueezeSpec{r.squeezing}.decibels()) << '\n'
      << "t1=" << format_number(c.t1) << '\n'
      << "r1=" << format_number(c.r1) << '\n'
      << "t2=" << format_number(c.t2) << '\n'
      << "r2=" << format_number(c.r2()) << '\n'
      << "eta1=" << format_number(c.eta1) << '\n'
      << "eta2=" << format_number(c.eta2) << '\n'
      << "engine=" << engine << '\n'
      << "target_parity=" << to_string(r.target_parity) << '\n'
      << "fock_dim=" << (r.fock ? std::to_string(r.fock_dim) : "na") << '\n'
      << "p_noclick_stage1=" << format_number(r.p_noclick_stage1) << '\n'
      << "p_click_stage2_given_stage1=" << format_number(r.p_click_stage2_given_stage1) << '\n'
      << "p_success=" << format_number(r.p_success) << '\n'
      << "beta_star=" << format_number(r.beta_star) << '\n'
      << "fidelity_star=" << format_number(r.fidelity_star) << '\n'
      << "target_beta=" << opt(c.target_beta) << '\n'
      << "fidelity_at_target=" << opt(r.fidelity_at_target) << '\n'
      << "gain_amp=" << format_number(r.gain_amp) << '\n'
      << "gain_intensity=" << format_number(r.gain_intensity) << '\n'
      << "chi_beta_star=" << engine_value(r.chi, &pipeline::EngineResult::beta_star) << '\n'
      << "fock_beta_star=" << engine_value(r.fock, &pipeline::EngineResult::beta_star) << '\n'
      << "engines_agree="
      << (r.engines_agree ? (*r.engines_agree ? "true" : "false") : "na") << '\n'
      << "engine_max_deviation="
      << (r.engines_agree ? format_number(r.engine_max_deviation) : "na") << '\n';
}

void write_wigner_csv(const phase_space::WignerField& field, std::ostream& out) {
  out << "q,p,W\n";
  for (std::size_t i = 0; i < field.q.size(); ++i) {
    for (std::size_t j = 0; j < field.p.size(); ++j) {
      out << format_number(field.q[i]) << ',' << format_number(field.p[j]) << ','
          << format_number(field.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
          << '\n';
    }
  }
}

void write_wigner_summary(const pipeline::WignerReport& report, std::ostream& out) {
  out << "beta_star=" << format_number(report.beta_star) << '\n'
      << "min_output=" << format_number(report.min_output) << '\n'
      << "min_ideal=" << format_number(report.min_ideal) << '\n'
      << "ratio=" << format_number(report.ratio) << '\n'
      << "integral_output=" << format_number(report.output.integral()) << '\n'
      << "integral_ideal=" << format_number(report.ideal.integral()) << '\n';
}

}  // namespace scamp::sweep
