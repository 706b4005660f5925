#pragma once

#include <string>
#include <vector>

namespace qkr {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Built-in identity suite: Bessel normalization and recurrence, phase
// periodicity, unitarity, cross-backend and analytic consistency, the
// moment formulas against brute force, and reflection symmetry.
// inject_phase_fault corrupts one phase-table entry inside the unitarity
// check; it exists so tests can prove the suite detects a broken table.
std::vector<CheckResult> run_validation_suite(bool inject_phase_fault = false);

}  // namespace qkr
