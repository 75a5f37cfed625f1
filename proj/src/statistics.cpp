#include "selpred/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "selpred/rng.hpp"

namespace selpred {

namespace {

constexpr double kPropertyTolerance = 1e-9;

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

double arithmetic_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of empty slice");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double emd(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("emd of empty slice");
  const auto sx = sorted_copy(x);
  const auto sy = sorted_copy(y);
  const double nx = static_cast<double>(sx.size());
  const double ny = static_cast<double>(sy.size());

  // Sweep the merged breakpoints; between consecutive distinct values the two
  // empirical CDFs are constant, so the integral is a finite sum of
  // |CDF gap| * segment width terms.
  std::size_t i = 0, j = 0;
  double total = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  while (i < sx.size() || j < sy.size()) {
    double v;
    if (i < sx.size() && j < sy.size())
      v = std::min(sx[i], sy[j]);
    else if (i < sx.size())
      v = sx[i];
    else
      v = sy[j];

    if (have_prev) {
      const double gap = std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny);
      total += gap * (v - prev);
    }
    while (i < sx.size() && sx[i] == v) ++i;
    while (j < sy.size() && sy[j] == v) ++j;
    prev = v;
    have_prev = true;
  }
  return total;
}

double emd_sorted_difference(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("emd of empty slice");
  if (x.size() != y.size())
    throw std::invalid_argument("sorted-difference route requires equal lengths");
  const auto sx = sorted_copy(x);
  const auto sy = sorted_copy(y);
  double total = 0.0;
  for (std::size_t i = 0; i < sx.size(); ++i) total += std::fabs(sx[i] - sy[i]);
  return total / static_cast<double>(sx.size());
}

double sample_stddev(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean = arithmetic_mean(values);
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

ModelClass ModelClass::checked(std::vector<std::vector<double>> tables) {
  if (tables.empty()) throw std::invalid_argument("model class must be nonempty");
  const std::size_t width = tables[0].size();
  if (width == 0) throw std::invalid_argument("loss tables must be nonempty");
  for (const auto& table : tables) {
    if (table.size() != width)
      throw std::invalid_argument("all loss tables must cover the same symbol domain");
    for (double v : table) {
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("loss table entry outside [0,1]");
    }
  }
  return ModelClass{std::move(tables)};
}

double ModelClass::average_loss(std::size_t model,
                                std::span<const std::uint32_t> symbols) const {
  if (model >= tables.size()) throw std::out_of_range("model index out of range");
  if (symbols.empty()) throw std::invalid_argument("average loss of empty slice");
  const auto& table = tables[model];
  double sum = 0.0;
  for (std::uint32_t s : symbols) {
    if (s >= table.size()) throw std::out_of_range("symbol id outside loss table domain");
    sum += table[s];
  }
  return sum / static_cast<double>(symbols.size());
}

std::size_t ModelClass::best_model(std::span<const std::uint32_t> symbols) const {
  std::size_t best = 0;
  double best_loss = average_loss(0, symbols);
  for (std::size_t i = 1; i < tables.size(); ++i) {
    const double loss = average_loss(i, symbols);
    if (loss < best_loss) {
      best = i;
      best_loss = loss;
    }
  }
  return best;
}

double ModelClass::best_average_loss(std::span<const std::uint32_t> symbols) const {
  return average_loss(best_model(symbols), symbols);
}

StatisticFamily mean_family() {
  StatisticFamily f;
  f.name = "mean";
  f.eval = [](const Slice& s) { return arithmetic_mean(s.reals()); };
  f.smoothness = 1.0;
  f.concat_concave = true;
  return f;
}

StatisticFamily plugin_mean_family(std::string name, std::function<double(double)> g,
                                   double g_lipschitz) {
  StatisticFamily f;
  f.name = std::move(name);
  f.eval = [g = std::move(g)](const Slice& s) {
    const auto values = s.reals();
    if (values.empty()) throw std::invalid_argument("mean of empty slice");
    double sum = 0.0;
    for (double v : values) sum += g(v);
    return sum / static_cast<double>(values.size());
  };
  f.smoothness = g_lipschitz;
  return f;
}

StatisticFamily square_mean_family() {
  return plugin_mean_family("square-mean", [](double x) { return x * x; }, 2.0);
}

StatisticFamily half_distance_family() {
  return plugin_mean_family("half-distance", [](double x) { return std::fabs(x - 0.5); },
                            1.0);
}

StatisticFamily emd_to_reference_family(std::vector<double> reference) {
  if (reference.empty()) throw std::invalid_argument("reference must be nonempty");
  for (double v : reference) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("reference value outside [0,1]");
  }
  StatisticFamily f;
  f.name = "emd-ref";
  f.eval = [ref = std::move(reference)](const Slice& s) {
    return emd(s.reals(), std::span<const double>(ref));
  };
  f.smoothness = 1.0;
  return f;
}

StatisticFamily learnability_family(ModelClass models) {
  StatisticFamily f;
  f.name = "learnability";
  f.kind = ObservationKind::Symbol;
  f.symbol_domain = models.domain_size();
  f.eval = [m = std::move(models)](const Slice& s) {
    return m.best_average_loss(s.symbols());
  };
  f.concat_concave = true;
  return f;
}

StatisticFamily max_mean_family() {
  StatisticFamily f;
  f.name = "max-mean";
  f.eval = [](const Slice& s) {
    const double mu = arithmetic_mean(s.reals());
    return std::max(mu, 1.0 - mu);
  };
  // Convex in the concatenation sense: (0) and (1) concatenate to value 1/2
  // while both parts score 1, so no concave flag and no smoothness claim.
  return f;
}

namespace {

std::vector<double> random_reals(Rng& rng, std::size_t len) {
  std::vector<double> v(len);
  for (double& x : v) x = rng.uniform01();
  return v;
}

std::vector<std::uint32_t> random_symbols(Rng& rng, std::size_t len, std::uint32_t domain) {
  std::vector<std::uint32_t> v(len);
  for (auto& x : v) x = static_cast<std::uint32_t>(rng.below(domain));
  return v;
}

Sequence random_sequence(const StatisticFamily& family, Rng& rng, std::size_t len) {
  if (family.kind == ObservationKind::Real) return Sequence::reals(random_reals(rng, len));
  return Sequence::symbols(random_symbols(rng, len, family.symbol_domain),
                           family.symbol_domain);
}

Sequence concatenate(const Sequence& a, const Sequence& b) {
  if (a.is_real()) {
    std::vector<double> v(a.real_values().begin(), a.real_values().end());
    v.insert(v.end(), b.real_values().begin(), b.real_values().end());
    return Sequence::reals(std::move(v));
  }
  std::vector<std::uint32_t> v(a.symbol_values().begin(), a.symbol_values().end());
  v.insert(v.end(), b.symbol_values().begin(), b.symbol_values().end());
  return Sequence::symbols(std::move(v), a.symbol_domain());
}

void record(PropertyReport& report, double violation) {
  report.worst_violation = std::max(report.worst_violation, violation);
  report.max_abs_gap = std::max(report.max_abs_gap, std::fabs(violation));
  if (violation > kPropertyTolerance) ++report.violations;
}

}  // namespace

PropertyReport check_concat_concave(const StatisticFamily& family, std::size_t trials,
                                    std::size_t max_len, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (max_len < 1) throw std::invalid_argument("max_len must be positive");
  Rng rng(seed);
  PropertyReport report;
  report.trials = trials;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t m1 = 1 + rng.below(max_len);
    const std::size_t m2 = 1 + rng.below(max_len);
    const Sequence x = random_sequence(family, rng, m1);
    const Sequence y = random_sequence(family, rng, m2);
    const Sequence xy = concatenate(x, y);
    const double fx = family.eval(x.view());
    const double fy = family.eval(y.view());
    const double fxy = family.eval(xy.view());
    const double w1 = static_cast<double>(m1) / static_cast<double>(m1 + m2);
    const double required = w1 * fx + (1.0 - w1) * fy;
    record(report, required - fxy);
  }
  return report;
}

PropertyReport check_smooth(const StatisticFamily& family, double lipschitz,
                            std::size_t trials, std::uint64_t seed, std::size_t max_len) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (family.kind != ObservationKind::Real)
    throw std::invalid_argument("smoothness check requires a real-valued family");
  Rng rng(seed);
  PropertyReport report;
  report.trials = trials;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t m = 1 + rng.below(max_len);
    const Sequence x = Sequence::reals(random_reals(rng, m));
    const Sequence y = Sequence::reals(random_reals(rng, m));
    const double gap = std::fabs(family.eval(x.view()) - family.eval(y.view()));
    const double budget = lipschitz * emd(x.real_values(), y.real_values());
    record(report, gap - budget);
  }
  return report;
}

}  // namespace selpred
