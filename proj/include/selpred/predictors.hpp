#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "selpred/core.hpp"
#include "selpred/rng.hpp"
#include "selpred/statistics.hpp"

namespace selpred {

/// One realization of a predictor's internal randomness: once drawn, the
/// predictor deterministically commits at commit_time over the next window
/// entries, with a payload computed from the observed prefix alone. The
/// engine only ever hands the payload that prefix, so reading past the
/// commitment time is structurally impossible.
struct PlannedCommitment {
  double probability = 1.0;
  std::size_t commit_time = 0;
  std::size_t window = 1;
  int k_prime = -1;  // scale index when drawn by a two-stage scheme, else -1
  std::function<CommitmentPayload(const Slice& prefix)> payload;
};

/// A predictor is its finite randomness support plus a sampler over it.
/// Exact expectation sums over the support; Monte Carlo draws from it.
class Predictor {
 public:
  Predictor(std::string name, std::size_t horizon,
            std::vector<PlannedCommitment> support,
            std::function<std::size_t(Rng&)> draw_index);

  const std::string& name() const noexcept { return name_; }
  std::size_t horizon() const noexcept { return horizon_; }
  const std::vector<PlannedCommitment>& support() const noexcept { return support_; }
  std::size_t sample_index(Rng& rng) const;
  const PlannedCommitment& draw(Rng& rng) const;

 private:
  std::string name_;
  std::size_t horizon_ = 0;
  std::vector<PlannedCommitment> support_;
  std::function<std::size_t(Rng&)> draw_index_;
};

/// Draws a scale k' uniform on {1..k} and an aligned start t uniform on
/// {0, 2^k', ..., n - 2^k'}, observes through t + 2^(k'-1), and predicts the
/// family value of the observed half-window for the hidden half.
Predictor selective_predictor(const StatisticFamily& family, std::size_t k);

/// Runs a power-of-two predictor on the length-2^floor(log2 n) prefix of a
/// general-length sequence. Requires n >= 2.
Predictor wrap_general_length(Predictor base, std::size_t n);

/// Same (k', t) draw as selective_predictor, but outputs the model index
/// minimizing the average table loss on the observed half-window
/// (smallest index on ties).
Predictor erm_predictor(const ModelClass& models, std::size_t k);

/// Commits at exactly t over the whole remainder, predicting the prefix mean
/// (1/2 when t = 0).
Predictor fixed_time_predictor(std::size_t n, std::size_t t);

/// Commits at a uniformly random feasible t with window exactly m, predicting
/// the mean of the last min(t, m) observed values (1/2 when t = 0).
Predictor fixed_window_predictor(std::size_t n, std::size_t m);

/// Commits at a uniformly random t over the whole remainder, predicting the
/// prefix mean (1/2 when t = 0).
Predictor tail_window_predictor(std::size_t n);

}  // namespace selpred
