#pragma once

#include <string>
#include <vector>

#include "fhn/experiments.hpp"

namespace fhn {

struct SuiteReport {
  std::string suite;
  bool pass = false;
  std::vector<Check> checks;
};

/// lemmas, sturm, energy, backends, symmetry.
std::vector<std::string> suite_names();

/// Runs one named suite. Throws ConfigError for unknown names.
SuiteReport run_suite(const std::string& name);

/// "all" expands to every suite, run on at most `threads` worker threads.
std::vector<SuiteReport> run_suites(const std::string& name, unsigned threads = 1);

/// FHN_THREADS if set and positive, else the hardware concurrency (at least 1).
unsigned thread_budget();

}  // namespace fhn
