#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "selpred/core.hpp"
#include "selpred/predictors.hpp"
#include "selpred/rng.hpp"
#include "selpred/sequences.hpp"
#include "selpred/statistics.hpp"

namespace selpred {

enum class Loss { Squared, Absolute };

/// Every parallel kernel keeps a serial reference path; both fill the same
/// index-addressed buffers and reduce in index order, so results are
/// bit-identical either way.
enum class Execution { Serial, Parallel };

/// What the game scores against: a statistic family for value predictions,
/// or a model class for excess-risk (model index) predictions.
struct GameSpec {
  const StatisticFamily* family = nullptr;
  const ModelClass* models = nullptr;
  Loss loss = Loss::Squared;
};

/// Thrown when a commitment lands outside the horizon.
class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
/// Thrown when a predictor fails to commit before the sequence ends.
class TotalityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plays one game under the no-lookahead protocol: observations are revealed
/// one at a time, the payload sees only the prefix at its commitment time,
/// and the realized value is computed afterwards on the hidden window.
GameResult play(const Sequence& sequence, const Predictor& predictor,
                const GameSpec& spec, Rng& rng);
GameResult play_planned(const Sequence& sequence, const PlannedCommitment& planned,
                        const GameSpec& spec);

struct SupportRow {
  double probability = 0.0;
  int k_prime = -1;
  std::size_t t = 0;
  std::size_t m = 0;
  double predicted = 0.0;
  double actual = 0.0;
  double loss = 0.0;
};

/// Exact expectation over the predictor's randomness support:
/// sum of probability * loss of each induced deterministic play.
double exact_expected_loss(const Sequence& sequence, const Predictor& predictor,
                           const GameSpec& spec, Execution exec = Execution::Parallel);
std::vector<SupportRow> exact_support_rows(const Sequence& sequence,
                                           const Predictor& predictor,
                                           const GameSpec& spec,
                                           Execution exec = Execution::Parallel);

struct PlayRecord {
  std::size_t trial = 0;
  int k_prime = -1;
  std::size_t t = 0;
  std::size_t m = 0;
  double predicted = 0.0;
  double actual = 0.0;
  double loss = 0.0;
};

struct TrialReport {
  std::string experiment;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  double mean = 0.0;
  double ci_half_width = 0.0;  // 1.96 * sample std / sqrt(trials)
  std::vector<double> losses;  // one per trial, in trial order
  std::vector<PlayRecord> records;
};

/// Runs independent trials; trial i draws its rng state from
/// mix_seed(master_seed, trial_offset + i), so runs are order-independent,
/// mergeable, and bit-reproducible for a fixed seed.
TrialReport monte_carlo(const SequenceSource& source, const Predictor& predictor,
                        const GameSpec& spec, std::size_t trials,
                        std::uint64_t master_seed, std::size_t trial_offset = 0,
                        Execution exec = Execution::Parallel);

TrialReport merge(const TrialReport& a, const TrialReport& b);

enum class ConstraintKind { AllPairs, FixedTime, FixedWindow, TailOnly };
struct Constraint {
  ConstraintKind kind = ConstraintKind::AllPairs;
  std::size_t value = 0;  // the fixed t or m, when applicable
};

struct VarianceRow {
  std::size_t t = 0;
  std::size_t m = 0;
  std::size_t prefix_id = 0;  // ordinal of the prefix within this (t, m)
  double prefix_probability = 0.0;
  double variance = 0.0;
};

struct VarianceCertificate {
  std::size_t n = 0;
  double min_variance = 0.0;
  std::size_t argmin_t = 0;
  std::size_t argmin_m = 0;
  std::size_t argmin_prefix = 0;
};

struct VarianceScan {
  std::vector<VarianceRow> rows;
  VarianceCertificate certificate;
};

/// For every feasible (t, m) under the constraint and every realizable
/// prefix, computes Var[(1/m) sum x_{t+1..t+m} | prefix] from the enumerated
/// joint distribution. The minimum lower-bounds every predictor's expected
/// squared loss against the source under that constraint.
VarianceScan min_conditional_variance(const SequenceSource& source, Constraint constraint,
                                      Execution exec = Execution::Parallel);

/// Fast path for the selective mean predictor's exact expected squared loss
/// on a real sequence of length 2^k; one prefix-sum pass per scale. Agrees
/// with exact_expected_loss on the mean family to within rounding.
double selective_mean_exact_loss(std::span<const double> values, std::size_t k,
                                 Execution exec = Execution::Serial);

/// CSV emission, schema:
///   experiment,k,n,trial,k_prime,t,m,predicted,actual,loss,probability,weighted_loss
/// Monte Carlo rows leave the last two columns empty; exact-mode rows carry
/// trial = -1 with them filled. Leading '#' lines echo the configuration.
void write_report_csv(const TrialReport& report,
                      const std::map<std::string, std::string>& meta, std::ostream& out);
void write_exact_csv(const std::string& experiment, const std::vector<SupportRow>& rows,
                     const std::map<std::string, std::string>& meta, std::ostream& out);
void write_variance_csv(const VarianceScan& scan,
                        const std::map<std::string, std::string>& meta, std::ostream& out);

/// Figure data: samples one anti-concentrated sequence of length 2^k
/// (k >= 16) and emits the first 30 non-overlapping block means at scales
/// 2^10 and 2^15 as CSV rows scale,block_index,block_mean.
std::string figure_csv(std::size_t k, std::uint64_t seed);

}  // namespace selpred
