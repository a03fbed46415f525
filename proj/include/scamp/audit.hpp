#pragma once

// Invariant, cross-engine and closed-form checks run by `scamp validate`.

#include "scamp/fock.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace scamp::audit {

enum class Category {
  invariant,
  agreement,
  /// Printed closed forms that are known to disagree with the engines; a
  /// mismatch here is reported but never fails validation.
  known_discrepancy,
};

std::string_view to_string(Category c);

struct AuditCheck {
  std::string suite;
  std::string name;
  Category category;
  bool passed;
  double value;
  double tolerance;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditCheck> checks;

  void append(const AuditReport& other);
  /// True when every check outside the known-discrepancy category passed.
  bool ok() const;
  std::size_t failures(bool include_known = false) const;
  std::string to_text() const;
  std::string to_json() const;
};

using BeamSplitterFn =
    std::function<fock::TwoModeFock(const fock::TwoModeFock&, double t, double r)>;

struct AuditOptions {
  /// Injected so that a deliberately broken convention can be shown to fail.
  BeamSplitterFn beamsplitter = [](const fock::TwoModeFock& s, double t, double r) {
    return fock::beamsplitter_fock(s, t, r);
  };
  std::uint64_t seed = 20240611;
  /// Run the 5 x 2 x 2 x 2 engine-agreement grid (a few seconds).
  bool engine_grid = true;
};

AuditReport povm_completeness();
AuditReport chi_invariants();
AuditReport beamsplitter_unitarity(const AuditOptions& options = {});
AuditReport convention_lock(const BeamSplitterFn& beamsplitter);
AuditReport engine_agreement(const AuditOptions& options = {});
AuditReport truncation_monotonicity();
AuditReport csv_determinism();
AuditReport channel_identity(const AuditOptions& options = {});
AuditReport closed_forms();

AuditReport run_all(const AuditOptions& options = {});

}  // namespace scamp::audit
