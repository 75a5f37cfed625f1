#include "selpred/predictors.hpp"

#include <memory>
#include <stdexcept>

namespace selpred {

namespace {

std::size_t floor_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{2} << k) <= n) ++k;
  return k;
}

double prefix_mean_or_half(std::span<const double> prefix) {
  if (prefix.empty()) return 0.5;
  return arithmetic_mean(prefix);
}

}  // namespace

Predictor::Predictor(std::string name, std::size_t horizon,
                     std::vector<PlannedCommitment> support,
                     std::function<std::size_t(Rng&)> draw_index)
    : name_(std::move(name)),
      horizon_(horizon),
      support_(std::move(support)),
      draw_index_(std::move(draw_index)) {
  if (horizon_ == 0) throw std::invalid_argument("predictor horizon must be positive");
  if (support_.empty()) throw std::invalid_argument("predictor support must be nonempty");
  for (const auto& planned : support_) {
    if (planned.commit_time > horizon_ - 1 ||
        planned.window < 1 || planned.window > horizon_ - planned.commit_time)
      throw std::invalid_argument("support point outside the game horizon");
    if (!planned.payload) throw std::invalid_argument("support point without payload");
  }
}

std::size_t Predictor::sample_index(Rng& rng) const {
  const std::size_t idx = draw_index_(rng);
  if (idx >= support_.size()) throw std::logic_error("sampler returned invalid index");
  return idx;
}

const PlannedCommitment& Predictor::draw(Rng& rng) const {
  return support_[sample_index(rng)];
}

Predictor selective_predictor(const StatisticFamily& family, std::size_t k) {
  if (k < 1) throw std::invalid_argument("scale count k must be >= 1");
  if (k > 31) throw std::invalid_argument("horizon 2^k would overflow");
  const std::size_t n = std::size_t{1} << k;
  auto shared_family = std::make_shared<const StatisticFamily>(family);

  std::vector<PlannedCommitment> support;
  std::vector<std::size_t> scale_offset(k + 1, 0);
  for (std::size_t kp = 1; kp <= k; ++kp) {
    scale_offset[kp] = support.size();
    const std::size_t span = std::size_t{1} << kp;
    const std::size_t half = span / 2;
    const std::size_t positions = n / span;
    const double probability = 1.0 / (static_cast<double>(k) * static_cast<double>(positions));
    for (std::size_t pos = 0; pos < positions; ++pos) {
      const std::size_t t = pos * span;
      PlannedCommitment planned;
      planned.probability = probability;
      planned.commit_time = t + half;
      planned.window = half;
      planned.k_prime = static_cast<int>(kp);
      planned.payload = [shared_family, t, half](const Slice& prefix) -> CommitmentPayload {
        return shared_family->eval(prefix.subslice(t, half));
      };
      support.push_back(std::move(planned));
    }
  }

  auto draw_index = [k, n, scale_offset](Rng& rng) {
    const std::size_t kp = 1 + rng.below(k);
    const std::size_t positions = n >> kp;
    return scale_offset[kp] + rng.below(positions);
  };
  return Predictor("selective-" + family.name, n, std::move(support), std::move(draw_index));
}

Predictor wrap_general_length(Predictor base, std::size_t n) {
  if (n < 2) throw std::invalid_argument("general-length wrapper requires n >= 2");
  const std::size_t k = floor_log2(n);
  const std::size_t prefix = std::size_t{1} << k;
  if (base.horizon() != prefix)
    throw std::invalid_argument("base predictor horizon must be 2^floor(log2 n)");
  if (n == prefix) return base;
  // Support points already live inside the first 2^k entries; only the
  // horizon changes.
  std::vector<PlannedCommitment> support = base.support();
  auto inner = std::make_shared<Predictor>(std::move(base));
  auto draw_index = [inner](Rng& rng) { return inner->sample_index(rng); };
  return Predictor("wrapped-" + inner->name(), n, std::move(support),
                   std::move(draw_index));
}

Predictor erm_predictor(const ModelClass& models, std::size_t k) {
  if (k < 1) throw std::invalid_argument("scale count k must be >= 1");
  if (k > 31) throw std::invalid_argument("horizon 2^k would overflow");
  const std::size_t n = std::size_t{1} << k;
  auto shared_models = std::make_shared<const ModelClass>(models);

  std::vector<PlannedCommitment> support;
  std::vector<std::size_t> scale_offset(k + 1, 0);
  for (std::size_t kp = 1; kp <= k; ++kp) {
    scale_offset[kp] = support.size();
    const std::size_t span = std::size_t{1} << kp;
    const std::size_t half = span / 2;
    const std::size_t positions = n / span;
    const double probability = 1.0 / (static_cast<double>(k) * static_cast<double>(positions));
    for (std::size_t pos = 0; pos < positions; ++pos) {
      const std::size_t t = pos * span;
      PlannedCommitment planned;
      planned.probability = probability;
      planned.commit_time = t + half;
      planned.window = half;
      planned.k_prime = static_cast<int>(kp);
      planned.payload = [shared_models, t, half](const Slice& prefix) -> CommitmentPayload {
        return shared_models->best_model(prefix.symbols().subspan(t, half));
      };
      support.push_back(std::move(planned));
    }
  }

  auto draw_index = [k, n, scale_offset](Rng& rng) {
    const std::size_t kp = 1 + rng.below(k);
    const std::size_t positions = n >> kp;
    return scale_offset[kp] + rng.below(positions);
  };
  return Predictor("erm", n, std::move(support), std::move(draw_index));
}

Predictor fixed_time_predictor(std::size_t n, std::size_t t) {
  if (n < 1) throw std::invalid_argument("horizon must be positive");
  if (t > n - 1) throw std::invalid_argument("prediction time t out of range");
  PlannedCommitment planned;
  planned.probability = 1.0;
  planned.commit_time = t;
  planned.window = n - t;
  planned.payload = [](const Slice& prefix) -> CommitmentPayload {
    return prefix_mean_or_half(prefix.reals());
  };
  return Predictor("fixed-time-" + std::to_string(t), n, {std::move(planned)},
                   [](Rng&) { return std::size_t{0}; });
}

Predictor fixed_window_predictor(std::size_t n, std::size_t m) {
  if (n < 1) throw std::invalid_argument("horizon must be positive");
  if (m < 1 || m > n) throw std::invalid_argument("window length m out of range");
  const std::size_t positions = n - m + 1;
  const double probability = 1.0 / static_cast<double>(positions);
  std::vector<PlannedCommitment> support;
  for (std::size_t t = 0; t < positions; ++t) {
    PlannedCommitment planned;
    planned.probability = probability;
    planned.commit_time = t;
    planned.window = m;
    planned.payload = [m](const Slice& prefix) -> CommitmentPayload {
      const auto values = prefix.reals();
      if (values.empty()) return 0.5;
      const std::size_t lookback = std::min(values.size(), m);
      return arithmetic_mean(values.subspan(values.size() - lookback, lookback));
    };
    support.push_back(std::move(planned));
  }
  return Predictor("fixed-window-" + std::to_string(m), n, std::move(support),
                   [positions](Rng& rng) { return rng.below(positions); });
}

Predictor tail_window_predictor(std::size_t n) {
  if (n < 1) throw std::invalid_argument("horizon must be positive");
  const double probability = 1.0 / static_cast<double>(n);
  std::vector<PlannedCommitment> support;
  for (std::size_t t = 0; t < n; ++t) {
    PlannedCommitment planned;
    planned.probability = probability;
    planned.commit_time = t;
    planned.window = n - t;
    planned.payload = [](const Slice& prefix) -> CommitmentPayload {
      return prefix_mean_or_half(prefix.reals());
    };
    support.push_back(std::move(planned));
  }
  return Predictor("tail-window", n, std::move(support),
                   [n](Rng& rng) { return rng.below(n); });
}

}  // namespace selpred
