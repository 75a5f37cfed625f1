#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "selpred/sequences.hpp"

using namespace selpred;

TEST_CASE("tree transitions preserve the parent mean exactly") {
  for (std::size_t k : {1u, 2u, 3u, 5u, 8u, 20u}) {
    for (std::size_t j = 1; j <= k; ++j) {
      for (int parent_sign : {+1, -1}) {
        const double up = tree_up_probability(j, parent_sign);
        CHECK(up >= 0.0);
        CHECK(up <= 1.0);
        const double down = 1.0 - up;
        const double parent = tree_value(j - 1, parent_sign, k);
        const double mean = up * tree_value(j, +1, k) + down * tree_value(j, -1, k);
        CHECK(std::fabs(mean - parent) <= 1e-12);
        // conditional variance is delta^2 = 1/(4k)
        const double spread = tree_value(j, +1, k) - 0.5;
        const double ev = 2.0 * up - 1.0;
        const double var = spread * spread * (1.0 - ev * ev);
        CHECK(var == doctest::Approx(1.0 / (4.0 * static_cast<double>(k))).epsilon(1e-9));
      }
    }
  }
  CHECK(tree_up_probability(1, +1) == 0.5);
  CHECK(tree_up_probability(1, -1) == 0.5);
}

TEST_CASE("sampled trees satisfy the construction invariants") {
  Rng rng(31);
  for (std::size_t k : {1u, 3u, 6u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const TreeSample tree = sample_tree(k, rng);
      CHECK(tree.height == k);
      CHECK(tree.delta == doctest::Approx(0.5 / std::sqrt(static_cast<double>(k))));
      CHECK(tree.levels[0].size() == 1);
      CHECK(tree.levels[0][0] == 0.5);
      for (std::size_t j = 1; j <= k; ++j) {
        CHECK(tree.levels[j].size() == (std::size_t{1} << j));
        for (double v : tree.levels[j]) {
          const bool two_point = v == tree_value(j, +1, k) || v == tree_value(j, -1, k);
          CHECK(two_point);
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
        }
      }
      for (double leaf : tree.levels[k]) CHECK((leaf == 0.0 || leaf == 1.0));
    }
  }
  CHECK_THROWS_AS(sample_tree(0, rng), std::invalid_argument);
}

TEST_CASE("level-1 values for k=3 sit at 1/2 +- 1/(2 sqrt 3)") {
  Rng rng(32);
  const TreeSample tree = sample_tree(3, rng);
  const double spread = 0.5 / std::sqrt(3.0);
  for (double v : tree.levels[1])
    CHECK(std::fabs(std::fabs(v - 0.5) - spread) <= 1e-12);
}

TEST_CASE("empirical child mean tracks the parent") {
  // estimate E[child | parent sign +] at level 2 of a k=2 tree
  const std::size_t k = 2;
  Rng rng(33);
  double sum = 0.0;
  std::size_t count = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const TreeSample tree = sample_tree(k, rng);
    if (tree.levels[1][0] == tree_value(1, +1, k)) {
      sum += tree.levels[2][0];
      ++count;
    }
  }
  REQUIRE(count > 10000);
  const double parent = tree_value(1, +1, k);
  const double mean = sum / static_cast<double>(count);
  // leaf values are 1/2 +- 1/2, so the std error is at most 1/(2 sqrt count)
  const double se = 0.5 / std::sqrt(static_cast<double>(count));
  CHECK(std::fabs(mean - parent) <= 3.0 * se);
}

TEST_CASE("tree enumeration: counts, total mass, leaf marginals") {
  const std::map<std::size_t, std::size_t> expected_counts = {
      {1, 4}, {2, 64}, {3, 16384}};  // 2^(2^(k+1) - 2)
  for (const auto& [k, expected] : expected_counts) {
    const auto outcomes = enumerate_anti_concentrated(k);
    CHECK(outcomes.size() == expected);
    double total = 0.0;
    const std::size_t n = std::size_t{1} << k;
    std::vector<double> leaf_mean(n, 0.0);
    for (const auto& outcome : outcomes) {
      CHECK(outcome.probability > 0.0);
      total += outcome.probability;
      const auto leaves = outcome.sequence.real_values();
      REQUIRE(leaves.size() == n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK((leaves[i] == 0.0 || leaves[i] == 1.0));
        leaf_mean[i] += outcome.probability * leaves[i];
      }
    }
    CHECK(std::fabs(total - 1.0) <= 1e-12);
    for (double m : leaf_mean) CHECK(std::fabs(m - 0.5) <= 1e-12);
  }
  CHECK_THROWS_AS(enumerate_anti_concentrated(4), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_anti_concentrated(0), std::invalid_argument);
}

TEST_CASE("anti-concentrated source length and sample validity") {
  const SequenceSource src = anti_concentrated_source(5);
  CHECK(src.length == 32);
  CHECK_FALSE(src.enumerable());  // guard applies above k=3
  Rng rng(34);
  const Sequence s = src.sample(rng);
  CHECK(s.size() == 32);
  for (double v : s.real_values()) CHECK((v == 0.0 || v == 1.0));
  CHECK(anti_concentrated_source(3).enumerable());
  CHECK_THROWS_AS(anti_concentrated_source(0), std::invalid_argument);
}

TEST_CASE("fixed-time adversary") {
  const SequenceSource src = fixed_time_adversary(4, 2);
  const auto outcomes = src.enumerate();
  REQUIRE(outcomes.size() == 2);
  CHECK(outcomes[0].probability == 0.5);
  CHECK(outcomes[1].probability == 0.5);
  const std::vector<double> zero = {0, 0, 0, 0};
  const std::vector<double> tail = {0, 0, 1, 1};
  const auto a = outcomes[0].sequence.real_values();
  const auto b = outcomes[1].sequence.real_values();
  CHECK(std::vector<double>(a.begin(), a.end()) == zero);
  CHECK(std::vector<double>(b.begin(), b.end()) == tail);

  const auto degenerate = fixed_time_adversary(1, 0).enumerate();
  CHECK(degenerate[0].sequence.real_values()[0] == 0.0);
  CHECK(degenerate[1].sequence.real_values()[0] == 1.0);
  CHECK_THROWS_AS(fixed_time_adversary(4, 4), std::invalid_argument);
}

TEST_CASE("block adversary") {
  CHECK(block_layout(8, 4) == std::vector<std::size_t>{2, 2, 2, 2});
  CHECK(block_layout(7, 4) == std::vector<std::size_t>{2, 2, 2, 1});
  CHECK_THROWS_AS(block_adversary(3, 5), std::invalid_argument);

  const SequenceSource src = block_adversary(8, 4);
  const auto outcomes = src.enumerate();
  CHECK(outcomes.size() == 16);
  for (const auto& outcome : outcomes) {
    CHECK(outcome.probability == doctest::Approx(1.0 / 16.0));
    // piecewise constant on the declared boundaries
    const auto v = outcome.sequence.real_values();
    std::size_t offset = 0;
    for (std::size_t size : block_layout(8, 4)) {
      for (std::size_t i = 1; i < size; ++i) CHECK(v[offset + i] == v[offset]);
      offset += size;
    }
  }

  // every length-4 window contains an entire block
  const auto sizes = block_layout(8, 4);
  for (std::size_t t = 0; t + 4 <= 8; ++t) {
    bool contains = false;
    std::size_t offset = 0;
    for (std::size_t size : sizes) {
      if (offset >= t && offset + size <= t + 4) contains = true;
      offset += size;
    }
    CHECK(contains);
  }
}

TEST_CASE("halving block adversary") {
  CHECK(halving_block_layout(4) == std::vector<std::size_t>{2, 1, 1});
  CHECK(halving_block_layout(8) == std::vector<std::size_t>{4, 2, 1, 1});
  CHECK_THROWS_AS(halving_block_adversary(3), std::invalid_argument);
  CHECK_THROWS_AS(halving_block_adversary(1), std::invalid_argument);

  const auto outcomes = halving_block_adversary(4).enumerate();
  CHECK(outcomes.size() == 8);

  // for any t some block starting at or after t has size >= (n - t) / 4
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    const auto sizes = halving_block_layout(n);
    CHECK(sizes.size() == static_cast<std::size_t>(std::log2(n)) + 1);
    for (std::size_t t = 0; t < n; ++t) {
      bool found = false;
      std::size_t offset = 0;
      for (std::size_t size : sizes) {
        if (offset >= t && 4 * size >= n - t) found = true;
        offset += size;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("erm hard instance matches the k=3 table") {
  const ErmHardInstance inst = erm_hard_instance(3);
  CHECK(inst.epsilon == doctest::Approx(1.0 / 12.0));
  const double e = 1.0 / 12.0;
  const std::vector<std::vector<double>> expected = {
      {e, 1, e, 1, e, 1, e, 1},
      {2 * e, 2 * e, 1, 1, 2 * e, 2 * e, 1, 1},
      {3 * e, 3 * e, 3 * e, 3 * e, 1, 1, 1, 1}};
  CHECK(inst.models.tables == expected);
  const auto symbols = inst.sequence.symbol_values();
  for (std::size_t i = 0; i < symbols.size(); ++i) CHECK(symbols[i] == i);
  CHECK_THROWS_AS(erm_hard_instance(1), std::invalid_argument);
}

TEST_CASE("erm hard instance k=2 from the formula") {
  const ErmHardInstance inst = erm_hard_instance(2);
  const double e = 1.0 / 8.0;
  const std::vector<std::vector<double>> expected = {{e, 1, e, 1},
                                                     {2 * e, 2 * e, 1, 1}};
  CHECK(inst.models.tables == expected);
}

TEST_CASE("erm hard instance: half-window averages and unique minimizer") {
  for (std::size_t k : {2u, 3u, 4u, 6u}) {
    const ErmHardInstance inst = erm_hard_instance(k);
    const auto symbols = inst.sequence.symbol_values();
    for (std::size_t kp = 1; kp <= k; ++kp) {
      const std::size_t span = std::size_t{1} << kp;
      const std::size_t half = span / 2;
      for (std::size_t t = 0; t + span <= symbols.size(); t += span) {
        const auto front = symbols.subspan(t, half);
        const auto back = symbols.subspan(t + half, half);
        const double front_avg = inst.models.average_loss(kp - 1, front);
        const double back_avg = inst.models.average_loss(kp - 1, back);
        CHECK(front_avg ==
              doctest::Approx(static_cast<double>(kp) * inst.epsilon).epsilon(1e-12));
        CHECK(back_avg == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(inst.models.best_model(front) == kp - 1);
        for (std::size_t other = 0; other < k; ++other) {
          if (other == kp - 1) continue;
          CHECK(inst.models.average_loss(other, front) > front_avg + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("basic sources") {
  Rng rng(35);
  const auto constant = constant_source(4, 0.5).sample(rng).real_values();
  CHECK(std::vector<double>(constant.begin(), constant.end()) ==
        std::vector<double>{0.5, 0.5, 0.5, 0.5});

  const auto alternating = alternating_source(4).sample(rng).real_values();
  CHECK(std::vector<double>(alternating.begin(), alternating.end()) ==
        std::vector<double>{0, 1, 0, 1});

  double sum = 0.0;
  const int draws = 100000;
  const SequenceSource bits = iid_uniform_bits(1);
  for (int i = 0; i < draws; ++i) sum += bits.sample(rng).real_values()[0];
  const double se = 0.5 / std::sqrt(static_cast<double>(draws));
  CHECK(std::fabs(sum / draws - 0.5) <= 3.0 * se);

  CHECK_THROWS_AS(constant_source(4, 1.5), std::invalid_argument);
  const Sequence symbols = iid_uniform_symbols(16, 5).sample(rng);
  for (auto s : symbols.symbol_values()) CHECK(s < 5);
}

TEST_CASE("sequence CSV round trip is exact") {
  Rng rng(36);
  std::vector<double> values(64);
  for (auto& v : values) v = rng.uniform01();
  const Sequence original = Sequence::reals(values);

  std::stringstream buffer;
  write_sequence_csv(original, buffer);
  const Sequence parsed = read_sequence_csv(buffer, ObservationKind::Real);
  REQUIRE(parsed.size() == original.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    CHECK(parsed.real_values()[i] == values[i]);

  const Sequence bits = Sequence::reals({0, 1, 1, 0, 1});
  std::stringstream bit_buffer;
  write_sequence_csv(bits, bit_buffer);
  const Sequence parsed_bits = read_sequence_csv(bit_buffer, ObservationKind::Real);
  for (std::size_t i = 0; i < bits.size(); ++i)
    CHECK(parsed_bits.real_values()[i] == bits.real_values()[i]);

  const Sequence symbols = Sequence::symbols({3, 1, 4, 1, 5}, 6);
  std::stringstream sym_buffer;
  write_sequence_csv(symbols, sym_buffer);
  const Sequence parsed_symbols = read_sequence_csv(sym_buffer, ObservationKind::Symbol, 6);
  for (std::size_t i = 0; i < symbols.size(); ++i)
    CHECK(parsed_symbols.symbol_values()[i] == symbols.symbol_values()[i]);
}

TEST_CASE("block means") {
  const std::vector<double> v = {0, 1, 0, 1, 1, 1, 0, 0};
  const auto means = block_means(v, 2, 30);
  CHECK(means == std::vector<double>{0.5, 0.5, 1.0, 0.0});
  CHECK(block_means(v, 8, 30) == std::vector<double>{0.5});
  CHECK(block_means(v, 3, 2).size() == 2);
}
