#pragma once

#include <string>
#include <vector>

namespace qg::acceptance {

struct Criterion {
  int id{0};
  std::string name;
  bool pass{false};
  std::string details;
  // A criterion target shown to be unattainable (details carry the
  // analysis). It still runs and reports FAIL; the suite exit code only
  // flags unexpected failures.
  bool expected_fail{false};
};

struct Options {
  bool quick{false};  // reserved; the suite always runs every criterion
};

std::vector<Criterion> run_all(const Options& opts = {});
// Prints one pass/fail line per criterion; returns the number of
// unexpected failures.
int print_results(const std::vector<Criterion>& results);

}  // namespace qg::acceptance
