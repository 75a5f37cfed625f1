#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "selpred/predictors.hpp"
#include "selpred/sequences.hpp"

using namespace selpred;

namespace {

CommitmentPayload run_payload(const PlannedCommitment& planned, const Sequence& seq) {
  return planned.payload(seq.view(0, planned.commit_time));
}

}  // namespace

TEST_CASE("selective predictor support layout and probabilities") {
  for (std::size_t k : {1u, 3u, 6u}) {
    const std::size_t n = std::size_t{1} << k;
    const StatisticFamily family = mean_family();
    const Predictor p = selective_predictor(family, k);
    CHECK(p.horizon() == n);

    std::size_t index = 0;
    double total = 0.0;
    for (std::size_t kp = 1; kp <= k; ++kp) {
      const std::size_t span = std::size_t{1} << kp;
      const std::size_t positions = n / span;
      const double expected = 1.0 / (static_cast<double>(k) * static_cast<double>(positions));
      for (std::size_t pos = 0; pos < positions; ++pos, ++index) {
        const PlannedCommitment& planned = p.support()[index];
        CHECK(planned.probability == expected);  // same expression, bit-for-bit
        CHECK(planned.k_prime == static_cast<int>(kp));
        CHECK(planned.commit_time == pos * span + span / 2);
        CHECK(planned.window == span / 2);
        CHECK(planned.commit_time + planned.window <= n);
        total += planned.probability;
      }
    }
    CHECK(index == p.support().size());
    CHECK(std::fabs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("selective support windows stay inside the horizon for k up to 10") {
  const StatisticFamily family = mean_family();
  for (std::size_t k = 1; k <= 10; ++k) {
    const Predictor p = selective_predictor(family, k);
    const std::size_t n = std::size_t{1} << k;
    for (const auto& planned : p.support()) {
      CHECK(planned.commit_time <= n - 1);
      CHECK(planned.window >= 1);
      CHECK(planned.commit_time + planned.window <= n);
    }
  }
}

TEST_CASE("k=1 reduces to predicting the second entry equals the first") {
  const StatisticFamily family = mean_family();
  const Predictor p = selective_predictor(family, 1);
  REQUIRE(p.support().size() == 1);
  const PlannedCommitment& planned = p.support()[0];
  CHECK(planned.commit_time == 1);
  CHECK(planned.window == 1);
  const Sequence seq = Sequence::reals({0.7, 0.1});
  CHECK(std::get<double>(run_payload(planned, seq)) == 0.7);
}

TEST_CASE("predictor draws are deterministic under a fixed stream") {
  const StatisticFamily family = mean_family();
  const Predictor p = selective_predictor(family, 6);
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(p.sample_index(a) == p.sample_index(b));

  // sampled indices cover the support
  Rng rng(100);
  std::vector<int> seen(p.support().size(), 0);
  for (int i = 0; i < 20000; ++i) ++seen[p.sample_index(rng)];
  CHECK(seen[0] > 0);
  CHECK(seen[seen.size() - 1] > 0);
}

TEST_CASE("general-length wrapper") {
  const StatisticFamily family = mean_family();
  const Predictor wrapped = wrap_general_length(selective_predictor(family, 3), 12);
  CHECK(wrapped.horizon() == 12);
  for (const auto& planned : wrapped.support())
    CHECK(planned.commit_time + planned.window <= 8);

  const Predictor identity = wrap_general_length(selective_predictor(family, 3), 8);
  CHECK(identity.horizon() == 8);
  CHECK(identity.support().size() == 4 + 2 + 1);

  CHECK_THROWS_AS(wrap_general_length(selective_predictor(family, 3), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(wrap_general_length(selective_predictor(family, 3), 20),
                  std::invalid_argument);  // floor(log2 20) = 4, horizon mismatch
}

TEST_CASE("erm predictor outputs the empirical minimizer") {
  const ModelClass singleton = ModelClass::checked({std::vector<double>(4, 0.3)});
  const Predictor single = erm_predictor(singleton, 2);
  const Sequence seq = Sequence::symbols({0, 1, 2, 3}, 4);
  for (const auto& planned : single.support())
    CHECK(std::get<std::size_t>(run_payload(planned, seq)) == 0);

  const ErmHardInstance inst = erm_hard_instance(3);
  const Predictor erm = erm_predictor(inst.models, 3);
  for (const auto& planned : erm.support()) {
    const std::size_t chosen = std::get<std::size_t>(run_payload(planned, inst.sequence));
    CHECK(chosen == static_cast<std::size_t>(planned.k_prime) - 1);
    // the payload achieves the minimum observed-half average
    const auto observed = inst.sequence.symbol_values().subspan(
        planned.commit_time - planned.window, planned.window);
    const double chosen_avg = inst.models.average_loss(chosen, observed);
    for (std::size_t other = 0; other < inst.models.size(); ++other)
      CHECK(chosen_avg <= inst.models.average_loss(other, observed) + 1e-15);
  }
}

TEST_CASE("fixed-time baseline") {
  const Predictor p = fixed_time_predictor(4, 2);
  REQUIRE(p.support().size() == 1);
  const PlannedCommitment& planned = p.support()[0];
  CHECK(planned.commit_time == 2);
  CHECK(planned.window == 2);
  const Sequence seq = Sequence::reals({0, 0, 1, 1});
  CHECK(std::get<double>(run_payload(planned, seq)) == 0.0);

  const Predictor at_zero = fixed_time_predictor(4, 0);
  CHECK(std::get<double>(run_payload(at_zero.support()[0], seq)) == 0.5);
  CHECK_THROWS_AS(fixed_time_predictor(4, 4), std::invalid_argument);
}

TEST_CASE("fixed-window baseline") {
  const Predictor p = fixed_window_predictor(6, 2);
  CHECK(p.support().size() == 5);
  const Sequence seq = Sequence::reals({1, 1, 0, 0, 1, 1});
  for (const auto& planned : p.support()) {
    CHECK(planned.window == 2);
    const double prediction = std::get<double>(run_payload(planned, seq));
    if (planned.commit_time == 0) {
      CHECK(prediction == 0.5);
    } else if (planned.commit_time == 1) {
      CHECK(prediction == 1.0);  // only one observation available
    }
    CHECK(planned.probability == doctest::Approx(0.2));
  }
  CHECK_THROWS_AS(fixed_window_predictor(4, 5), std::invalid_argument);
}

TEST_CASE("tail-window baseline") {
  const Predictor p = tail_window_predictor(4);
  CHECK(p.support().size() == 4);
  for (const auto& planned : p.support()) {
    CHECK(planned.window == 4 - planned.commit_time);
    CHECK(planned.probability == doctest::Approx(0.25));
  }
}
