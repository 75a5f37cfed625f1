#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "selpred/core.hpp"

namespace selpred {

/// Mean of a nonempty slice of reals.
double arithmetic_mean(std::span<const double> values);

/// Earth mover's distance between the uniform distributions over two real
/// multisets, computed as the integral over [0,1] of the absolute gap between
/// the two empirical CDFs. Handles unequal lengths.
double emd(std::span<const double> x, std::span<const double> y);

/// Equal-length route: mean absolute difference of the sorted values.
/// Agrees with emd() to within rounding; kept as an independent second route.
double emd_sorted_difference(std::span<const double> x, std::span<const double> y);

/// Sample standard deviation (n-1 denominator; 0 for fewer than 2 samples).
double sample_stddev(std::span<const double> values);

/// A finite model class: each model is a loss table over a symbol domain,
/// entries in [0,1].
struct ModelClass {
  std::vector<std::vector<double>> tables;

  static ModelClass checked(std::vector<std::vector<double>> tables);

  std::size_t size() const noexcept { return tables.size(); }
  std::uint32_t domain_size() const noexcept {
    return tables.empty() ? 0 : static_cast<std::uint32_t>(tables[0].size());
  }

  double average_loss(std::size_t model, std::span<const std::uint32_t> symbols) const;
  /// Smallest-index model minimizing the average loss.
  std::size_t best_model(std::span<const std::uint32_t> symbols) const;
  double best_average_loss(std::span<const std::uint32_t> symbols) const;
};

/// A length-indexed statistic family f_m with capability flags. eval must be
/// deterministic and total on slices of its declared observation kind.
struct StatisticFamily {
  std::string name;
  ObservationKind kind = ObservationKind::Real;
  std::function<double(const Slice&)> eval;
  std::optional<double> smoothness;  // declared Lipschitz constant in EMD
  bool concat_concave = false;
  double range_lo = 0.0;
  double range_hi = 1.0;
  std::uint32_t symbol_domain = 0;  // symbol families: required domain size
};

StatisticFamily mean_family();
/// f_m(x) = (1/m) sum g(x_i) with caller-declared Lipschitz constant for g.
StatisticFamily plugin_mean_family(std::string name, std::function<double(double)> g,
                                   double g_lipschitz);
StatisticFamily square_mean_family();    // g(x) = x^2, L = 2
StatisticFamily half_distance_family();  // g(x) = |x - 1/2|, L = 1
/// f_m(x) = EMD(x, reference); 1-smooth by the triangle inequality.
StatisticFamily emd_to_reference_family(std::vector<double> reference);
/// Minimum average table loss over the class; concatenation-concave.
StatisticFamily learnability_family(ModelClass models);
/// max(mean, 1 - mean): deliberately not concatenation-concave.
StatisticFamily max_mean_family();

struct PropertyReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// Largest (required - achieved) seen; positive beyond tolerance = violation.
  double worst_violation = -std::numeric_limits<double>::infinity();
  /// Largest |achieved - required|, for equality diagnostics.
  double max_abs_gap = 0.0;
};

/// Samples random (x, y) pairs and checks
///   f(x ++ y) >= (m1 f(x) + m2 f(y)) / (m1 + m2)
/// within tolerance 1e-9.
PropertyReport check_concat_concave(const StatisticFamily& family, std::size_t trials,
                                    std::size_t max_len, std::uint64_t seed);

/// Samples random equal-length real pairs and checks
///   |f(x) - f(y)| <= L * EMD(x, y) + 1e-9.
PropertyReport check_smooth(const StatisticFamily& family, double lipschitz,
                            std::size_t trials, std::uint64_t seed,
                            std::size_t max_len = 16);

}  // namespace selpred
