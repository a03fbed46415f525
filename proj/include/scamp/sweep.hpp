#pragma once

// Configuration files, parameter grids, figure sweeps and the flat output
// formats used by the command-line front end.

#include "scamp/phase_space.hpp"
#include "scamp/pipeline.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scamp::sweep {

/// Flat key = value configuration. '#' starts a comment; blank lines are
/// ignored. Recognized keys:
///
///   input               cat | coherent
///   alpha               real > 0
///   parity              even | odd
///   squeezing           auto | real
///   guess               correct | wrong      (coherent input only)
///   r1                  stage-1 reflectivity, t1 follows
///   t2                  stage-2 transmissivity
///   eta                 sets eta1 and eta2
///   eta1, eta2          detector efficiencies
///   engine              chi | fock | both
///   truncation          fixed Fock dimension
///   target_beta         extra fidelity readout against this cat size
///   same_parity_target  true | false
///
/// Errors are ConfigError with "source:line: key: message".
/// Keys that were set are appended to `keys` when it is non-null.
pipeline::PipelineConfig parse_config(std::istream& in, const std::string& source,
                                      pipeline::PipelineConfig base = {},
                                      std::vector<std::string>* keys = nullptr);
pipeline::PipelineConfig load_config(const std::string& path, pipeline::PipelineConfig base = {},
                                     std::vector<std::string>* keys = nullptr);

/// Applies one setting; throws ConfigError "key: message".
void apply_setting(pipeline::PipelineConfig& config, std::string_view key, std::string_view value);

/// MIN:MAX:STEP, inclusive of MAX up to rounding.
struct Grid {
  double min;
  double max;
  double step;

  static Grid parse(std::string_view text);
  std::vector<double> points() const;
};

enum class Figure { squeezing, squeeze_fidelity, gain, fidelity, probability, ideal_gain };

struct FigureId {
  Figure figure;
  /// Input parity for the pipeline figures; empty means both.
  std::optional<Parity> parity;
};

/// Accepts 3a, 3b, 4a, 4b, 5a, 5b, 6a, 6b, 9 and the names squeezing,
/// squeeze_fidelity, gain, fidelity, probability, ideal_gain.
FigureId parse_figure(std::string_view text);

/// Column names of the CSV written for a figure.
const std::vector<std::string>& columns(Figure figure);

struct SweepSpec {
  FigureId id{Figure::gain, std::nullopt};
  Grid alpha{0.1, 2.0, 0.05};
  /// Base configuration; squeezing, engine, r1 and truncation are taken from here.
  pipeline::PipelineConfig base;
  /// Stage-2 transmissivities and detector efficiencies (eta1 = eta2) swept by
  /// the pipeline figures.
  std::vector<double> t2_values{0.97467943448089639068, 0.99498743710661995473};
  std::vector<double> eta_values{0.6, 0.8, 1.0};
  int threads = 0;  // 0 picks the hardware concurrency
};

/// Evaluates every grid point and writes the CSV. Points that fail carry the
/// message in the error column and NaN elsewhere. Rows are ordered by alpha,
/// then parity, t2 and eta, independent of the thread count.
void write_sweep(const SweepSpec& spec, std::ostream& out);

/// 12 significant digits, '.' as decimal separator, no locale dependence.
std::string format_number(double value);

/// One key=value line per field, fixed order.
void write_record(const pipeline::PipelineResult& result, std::ostream& out);

/// Long-format q,p,W table.
void write_wigner_csv(const phase_space::WignerField& field, std::ostream& out);
void write_wigner_summary(const pipeline::WignerReport& report, std::ostream& out);

}  // namespace scamp::sweep
