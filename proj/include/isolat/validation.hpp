#pragma once

// Cross-check battery wiring the independent prediction routes together:
// closed forms, residue arithmetic, torus sampling, and lattice counting must
// all agree on overlapping cases before longer experiments are worth running.

#include <cstdint>
#include <string>
#include <vector>

namespace isolat {

struct ValidationCheck {
  std::string name;
  std::string relation;  // "within", "at_least", or "at_most"
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // used by "within" only
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
};

// radius scales the lattice windows, seed feeds the sampled checks.
ValidationReport run_validation(double radius, std::uint64_t seed);

}  // namespace isolat
