#include "selpred/engine.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace selpred {

namespace {

struct Scored {
  double predicted = 0.0;
  double actual = 0.0;
  double loss = 0.0;
};

Scored score_commitment(const Sequence& seq, const PlannedCommitment& planned,
                        const CommitmentPayload& payload, const GameSpec& spec) {
  const Slice window = seq.view(planned.commit_time, planned.window);
  if (std::holds_alternative<double>(payload)) {
    if (!spec.family)
      throw std::invalid_argument("value prediction requires a statistic family");
    const double predicted = std::get<double>(payload);
    const double actual = spec.family->eval(window);
    const double loss = spec.loss == Loss::Squared ? squared_loss(predicted, actual)
                                                   : absolute_loss(predicted, actual);
    return {predicted, actual, loss};
  }
  if (!spec.models) throw std::invalid_argument("model prediction requires a model class");
  const auto symbols = window.symbols();
  const double predicted =
      spec.models->average_loss(std::get<std::size_t>(payload), symbols);
  const double actual = spec.models->best_average_loss(symbols);
  return {predicted, actual, predicted - actual};
}

SupportRow evaluate_planned(const Sequence& seq, const PlannedCommitment& planned,
                            const GameSpec& spec) {
  const std::size_t n = seq.size();
  if (planned.commit_time > n - 1)
    throw TotalityViolation("commitment time beyond the last revealable entry");
  if (planned.window < 1 || planned.window > n - planned.commit_time)
    throw ProtocolViolation("commitment window escapes the horizon");
  const Slice prefix = seq.view(0, planned.commit_time);
  const CommitmentPayload payload = planned.payload(prefix);
  const Scored s = score_commitment(seq, planned, payload, spec);
  return SupportRow{planned.probability, planned.k_prime, planned.commit_time,
                    planned.window,      s.predicted,     s.actual,
                    s.loss};
}

void require_horizon(const Sequence& seq, const Predictor& predictor) {
  if (seq.size() != predictor.horizon())
    throw std::invalid_argument("predictor horizon does not match sequence length");
}

class ErrorCollector {
 public:
  bool tripped() const { return failed_.load(std::memory_order_relaxed); }
  void capture() {
#ifdef _OPENMP
#pragma omp critical(selpred_error)
#endif
    {
      if (!failed_.exchange(true)) error_ = std::current_exception();
    }
  }
  void rethrow_if_any() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::atomic<bool> failed_{false};
  std::exception_ptr error_;
};

}  // namespace

GameResult play_planned(const Sequence& sequence, const PlannedCommitment& planned,
                        const GameSpec& spec) {
  const std::size_t n = sequence.size();
  // Reveal one observation per round; the payload closure receives exactly
  // the revealed prefix, never the full sequence.
  for (std::size_t observed = 0; observed < n; ++observed) {
    if (observed != planned.commit_time) continue;
    if (planned.window < 1 || planned.window > n - observed)
      throw ProtocolViolation("commitment window escapes the horizon");
    const Slice prefix = sequence.view(0, observed);
    const CommitmentPayload payload = planned.payload(prefix);
    const Commitment commitment = Commitment::checked(n, observed, planned.window, payload);
    const Scored s = score_commitment(sequence, planned, payload, spec);
    return GameResult{commitment, s.predicted, s.actual, s.loss};
  }
  throw TotalityViolation("predictor never committed before the sequence ended");
}

GameResult play(const Sequence& sequence, const Predictor& predictor,
                const GameSpec& spec, Rng& rng) {
  require_horizon(sequence, predictor);
  return play_planned(sequence, predictor.draw(rng), spec);
}

double exact_expected_loss(const Sequence& sequence, const Predictor& predictor,
                           const GameSpec& spec, Execution exec) {
  require_horizon(sequence, predictor);
  const auto& support = predictor.support();
  std::vector<double> weighted(support.size());
  ErrorCollector errors;
  const bool parallel = exec == Execution::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
#endif
  for (long long i = 0; i < static_cast<long long>(support.size()); ++i) {
    if (errors.tripped()) continue;
    try {
      const SupportRow row = evaluate_planned(sequence, support[i], spec);
      weighted[i] = row.probability * row.loss;
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow_if_any();
  double total = 0.0;
  for (double w : weighted) total += w;
  (void)parallel;
  return total;
}

std::vector<SupportRow> exact_support_rows(const Sequence& sequence,
                                           const Predictor& predictor,
                                           const GameSpec& spec, Execution exec) {
  require_horizon(sequence, predictor);
  const auto& support = predictor.support();
  std::vector<SupportRow> rows(support.size());
  ErrorCollector errors;
  const bool parallel = exec == Execution::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
#endif
  for (long long i = 0; i < static_cast<long long>(support.size()); ++i) {
    if (errors.tripped()) continue;
    try {
      rows[i] = evaluate_planned(sequence, support[i], spec);
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow_if_any();
  (void)parallel;
  return rows;
}

TrialReport monte_carlo(const SequenceSource& source, const Predictor& predictor,
                        const GameSpec& spec, std::size_t trials,
                        std::uint64_t master_seed, std::size_t trial_offset,
                        Execution exec) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (source.length != predictor.horizon())
    throw std::invalid_argument("predictor horizon does not match source length");

  TrialReport report;
  report.experiment = source.name + "/" + predictor.name();
  report.trials = trials;
  report.master_seed = master_seed;
  report.losses.resize(trials);
  report.records.resize(trials);

  ErrorCollector errors;
  const bool parallel = exec == Execution::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
#endif
  for (long long i = 0; i < static_cast<long long>(trials); ++i) {
    if (errors.tripped()) continue;
    try {
      const std::size_t trial = trial_offset + static_cast<std::size_t>(i);
      Rng rng(mix_seed(master_seed, trial));
      const Sequence seq = source.sample(rng);
      const PlannedCommitment& planned = predictor.draw(rng);
      const GameResult r = play_planned(seq, planned, spec);
      report.losses[i] = r.loss;
      report.records[i] = PlayRecord{trial,       planned.k_prime, r.commitment.t,
                                     r.commitment.m, r.predicted,  r.actual,
                                     r.loss};
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow_if_any();
  (void)parallel;

  double sum = 0.0;
  for (double l : report.losses) sum += l;
  report.mean = sum / static_cast<double>(trials);
  report.ci_half_width =
      trials > 1 ? 1.96 * sample_stddev(report.losses) / std::sqrt(static_cast<double>(trials))
                 : 0.0;
  return report;
}

TrialReport merge(const TrialReport& a, const TrialReport& b) {
  if (a.experiment != b.experiment || a.master_seed != b.master_seed)
    throw std::invalid_argument("cannot merge reports from different experiments");
  TrialReport out;
  out.experiment = a.experiment;
  out.master_seed = a.master_seed;
  out.trials = a.trials + b.trials;
  out.losses = a.losses;
  out.losses.insert(out.losses.end(), b.losses.begin(), b.losses.end());
  out.records = a.records;
  out.records.insert(out.records.end(), b.records.begin(), b.records.end());
  double sum = 0.0;
  for (double l : out.losses) sum += l;
  out.mean = sum / static_cast<double>(out.trials);
  out.ci_half_width = out.trials > 1
                          ? 1.96 * sample_stddev(out.losses) /
                                std::sqrt(static_cast<double>(out.trials))
                          : 0.0;
  return out;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> feasible_pairs(std::size_t n,
                                                                Constraint constraint) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  switch (constraint.kind) {
    case ConstraintKind::AllPairs:
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t m = 1; m <= n - t; ++m) pairs.emplace_back(t, m);
      break;
    case ConstraintKind::FixedTime: {
      const std::size_t t = constraint.value;
      if (t > n - 1) throw std::invalid_argument("fixed time t out of range");
      for (std::size_t m = 1; m <= n - t; ++m) pairs.emplace_back(t, m);
      break;
    }
    case ConstraintKind::FixedWindow: {
      const std::size_t m = constraint.value;
      if (m < 1 || m > n) throw std::invalid_argument("fixed window m out of range");
      for (std::size_t t = 0; t + m <= n; ++t) pairs.emplace_back(t, m);
      break;
    }
    case ConstraintKind::TailOnly:
      for (std::size_t t = 0; t < n; ++t) pairs.emplace_back(t, n - t);
      break;
  }
  return pairs;
}

struct GroupAccumulator {
  double mass = 0.0;
  double weighted_sum = 0.0;
  double weighted_square_sum = 0.0;
};

std::vector<VarianceRow> scan_pair(const std::vector<WeightedSequence>& outcomes,
                                   const std::vector<std::vector<double>>& prefix_sums,
                                   std::size_t t, std::size_t m) {
  // Prefix ids are assigned in first-encounter order over the fixed outcome
  // list, so the scan is deterministic and thread-count independent.
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<GroupAccumulator> groups;
  std::string key;
  for (std::size_t o = 0; o < outcomes.size(); ++o) {
    const auto values = outcomes[o].sequence.real_values();
    key.assign(reinterpret_cast<const char*>(values.data()), t * sizeof(double));
    const auto [it, inserted] = ids.try_emplace(key, groups.size());
    if (inserted) groups.emplace_back();
    GroupAccumulator& acc = groups[it->second];
    const double p = outcomes[o].probability;
    const double w =
        (prefix_sums[o][t + m] - prefix_sums[o][t]) / static_cast<double>(m);
    acc.mass += p;
    acc.weighted_sum += p * w;
    acc.weighted_square_sum += p * w * w;
  }
  std::vector<VarianceRow> rows(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const GroupAccumulator& acc = groups[g];
    const double mean = acc.weighted_sum / acc.mass;
    const double variance =
        std::max(0.0, acc.weighted_square_sum / acc.mass - mean * mean);
    rows[g] = VarianceRow{t, m, g, acc.mass, variance};
  }
  return rows;
}

}  // namespace

VarianceScan min_conditional_variance(const SequenceSource& source, Constraint constraint,
                                      Execution exec) {
  if (!source.enumerable())
    throw std::invalid_argument("variance scan requires an enumerable source");
  const std::vector<WeightedSequence> outcomes = source.enumerate();
  if (outcomes.empty()) throw std::invalid_argument("source enumerated no outcomes");
  const std::size_t n = source.length;

  std::vector<std::vector<double>> prefix_sums(outcomes.size());
  for (std::size_t o = 0; o < outcomes.size(); ++o) {
    const auto values = outcomes[o].sequence.real_values();
    prefix_sums[o].resize(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      prefix_sums[o][i + 1] = prefix_sums[o][i] + values[i];
  }

  const auto pairs = feasible_pairs(n, constraint);
  std::vector<std::vector<VarianceRow>> per_pair(pairs.size());
  ErrorCollector errors;
  const bool parallel = exec == Execution::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long long i = 0; i < static_cast<long long>(pairs.size()); ++i) {
    if (errors.tripped()) continue;
    try {
      per_pair[i] = scan_pair(outcomes, prefix_sums, pairs[i].first, pairs[i].second);
    } catch (...) {
      errors.capture();
    }
  }
  errors.rethrow_if_any();
  (void)parallel;

  VarianceScan scan;
  scan.certificate.n = n;
  scan.certificate.min_variance = std::numeric_limits<double>::infinity();
  for (const auto& rows : per_pair) {
    for (const VarianceRow& row : rows) {
      if (row.variance < scan.certificate.min_variance) {
        scan.certificate.min_variance = row.variance;
        scan.certificate.argmin_t = row.t;
        scan.certificate.argmin_m = row.m;
        scan.certificate.argmin_prefix = row.prefix_id;
      }
      scan.rows.push_back(row);
    }
  }
  return scan;
}

double selective_mean_exact_loss(std::span<const double> values, std::size_t k,
                                 Execution exec) {
  if (k < 1) throw std::invalid_argument("scale count k must be >= 1");
  const std::size_t n = std::size_t{1} << k;
  if (values.size() < n) throw std::invalid_argument("sequence shorter than 2^k");

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];

  const bool parallel = exec == Execution::Parallel;
  double total = 0.0;
  std::vector<double> buffer;
  for (std::size_t kp = 1; kp <= k; ++kp) {
    const std::size_t span = std::size_t{1} << kp;
    const std::size_t half = span / 2;
    const std::size_t positions = n / span;
    buffer.assign(positions, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && positions > 2048)
#endif
    for (long long pos = 0; pos < static_cast<long long>(positions); ++pos) {
      const std::size_t t = static_cast<std::size_t>(pos) * span;
      const double mean_front = (prefix[t + half] - prefix[t]) / static_cast<double>(half);
      const double mean_back =
          (prefix[t + span] - prefix[t + half]) / static_cast<double>(half);
      const double d = mean_front - mean_back;
      buffer[pos] = d * d;
    }
    double scale_sum = 0.0;
    for (double b : buffer) scale_sum += b;
    total += scale_sum / (static_cast<double>(k) * static_cast<double>(positions));
  }
  (void)parallel;
  return total;
}

}  // namespace selpred
