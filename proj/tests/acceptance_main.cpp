// Verification suite runner: one PASS/FAIL line per criterion, nonzero exit
// on any failure.

#include <cstring>
#include <iostream>
#include <string>

#include "selpred/acceptance.hpp"

int main(int argc, char** argv) {
  selpred::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      options.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (arg == "--out" && i + 1 < argc) {
      options.artifact_dir = argv[++i];
    } else if (arg == "--criteria" && i + 1 < argc) {
      options.only.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: selpred_acceptance [--seed S] [--out DIR] [--criteria N]...\n";
      return 2;
    }
  }

  const auto results = selpred::run_acceptance(options, std::cout);
  const bool ok = selpred::all_passed(results);
  std::cout << (ok ? "all criteria passed" : "FAILURES PRESENT") << " ("
            << results.size() << " run)\n";
  return ok ? 0 : 1;
}
