#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace selpred {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 42;
  std::string artifact_dir;  // when nonempty, CSV artifacts are written here
  std::vector<int> only;     // run only these criterion ids (empty = all)
};

/// Runs the verification suite, printing one PASS/FAIL line per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

/// Exact minimum-cost transport between the uniform distributions over two
/// small real multisets (sizes <= 6), solved as an assignment problem on
/// equal-mass atoms. Independent of the CDF-integral route; used to
/// cross-check it.
double transport_emd_oracle(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace selpred
