// Serial reference vs OpenMP kernels: both paths must produce bit-identical
// results because reductions happen in index order either way.

#include "doctest.h"
#include "selpred/engine.hpp"

using namespace selpred;

TEST_CASE("exact expectation: serial and parallel paths match bitwise") {
  const StatisticFamily family = mean_family();
  const GameSpec spec{&family, nullptr, Loss::Squared};
  Rng rng(41);
  for (std::size_t k : {4u, 8u, 11u}) {
    const std::size_t n = std::size_t{1} << k;
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform01();
    const Sequence seq = Sequence::reals(std::move(v));
    const Predictor p = selective_predictor(family, k);
    CHECK(exact_expected_loss(seq, p, spec, Execution::Serial) ==
          exact_expected_loss(seq, p, spec, Execution::Parallel));
    CHECK(selective_mean_exact_loss(seq.real_values(), k, Execution::Serial) ==
          selective_mean_exact_loss(seq.real_values(), k, Execution::Parallel));
  }
}

TEST_CASE("monte carlo: serial and parallel runs match bitwise") {
  const StatisticFamily family = mean_family();
  const GameSpec spec{&family, nullptr, Loss::Squared};
  const std::size_t k = 6;
  const Predictor p = selective_predictor(family, k);
  const SequenceSource source = anti_concentrated_source(k);
  const TrialReport serial = monte_carlo(source, p, spec, 500, 99, 0, Execution::Serial);
  const TrialReport parallel =
      monte_carlo(source, p, spec, 500, 99, 0, Execution::Parallel);
  CHECK(serial.losses == parallel.losses);
  CHECK(serial.mean == parallel.mean);
  CHECK(serial.ci_half_width == parallel.ci_half_width);
}

TEST_CASE("variance scan: serial and parallel runs match row for row") {
  const SequenceSource source = anti_concentrated_source(3);
  const VarianceScan serial =
      min_conditional_variance(source, Constraint{ConstraintKind::AllPairs, 0},
                               Execution::Serial);
  const VarianceScan parallel =
      min_conditional_variance(source, Constraint{ConstraintKind::AllPairs, 0},
                               Execution::Parallel);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].t == parallel.rows[i].t);
    CHECK(serial.rows[i].m == parallel.rows[i].m);
    CHECK(serial.rows[i].prefix_id == parallel.rows[i].prefix_id);
    CHECK(serial.rows[i].variance == parallel.rows[i].variance);
  }
  CHECK(serial.certificate.min_variance == parallel.certificate.min_variance);
}
