#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "geophase/uhlmann.hpp"

namespace geophase {

struct SelftestOptions {
  int steps = 4096;  // path N; quick mode halves it
  bool quick = false;
  /// Connection under test; replaced by a mutated copy to check that the
  /// suites notice.
  ConnectionFn gamma = connection_gamma;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Clifford, form equivalence, unitarity, block vanishing, Richardson and
/// closed-form suites. Never throws; an exception fails its suite.
std::vector<SuiteResult> run_selftest(const SelftestOptions& options);

/// Prints one row per suite; returns true when all passed.
bool report_selftest(const std::vector<SuiteResult>& results, std::ostream& out);

}  // namespace geophase
