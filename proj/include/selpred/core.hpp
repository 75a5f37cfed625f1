#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace selpred {

enum class ObservationKind { Real, Symbol };

/// A single observation: a real in [0,1] or a symbol id.
using Observation = std::variant<double, std::uint32_t>;

class Slice;

/// Immutable observation sequence. All entries share one variant; real
/// entries are validated to [0,1] on construction (strict, no clamping).
class Sequence {
 public:
  static Sequence reals(std::vector<double> values);
  static Sequence symbols(std::vector<std::uint32_t> values, std::uint32_t domain_size);

  ObservationKind kind() const noexcept { return kind_; }
  bool is_real() const noexcept { return kind_ == ObservationKind::Real; }
  std::size_t size() const noexcept;
  std::uint32_t symbol_domain() const noexcept { return domain_; }

  std::span<const double> real_values() const;
  std::span<const std::uint32_t> symbol_values() const;

  Observation at(std::size_t i) const;

  Slice view() const;
  Slice view(std::size_t offset, std::size_t length) const;

 private:
  Sequence() = default;
  ObservationKind kind_ = ObservationKind::Real;
  std::vector<double> reals_;
  std::vector<std::uint32_t> symbols_;
  std::uint32_t domain_ = 0;
};

/// Non-owning view of a contiguous sub-range of a Sequence.
class Slice {
 public:
  Slice(ObservationKind kind, std::span<const double> reals,
        std::span<const std::uint32_t> symbols, std::uint32_t domain)
      : kind_(kind), reals_(reals), symbols_(symbols), domain_(domain) {}

  ObservationKind kind() const noexcept { return kind_; }
  bool is_real() const noexcept { return kind_ == ObservationKind::Real; }
  std::size_t size() const noexcept {
    return is_real() ? reals_.size() : symbols_.size();
  }
  std::span<const double> reals() const;
  std::span<const std::uint32_t> symbols() const;
  std::uint32_t symbol_domain() const noexcept { return domain_; }

  Slice subslice(std::size_t offset, std::size_t length) const;

 private:
  ObservationKind kind_;
  std::span<const double> reals_;
  std::span<const std::uint32_t> symbols_;
  std::uint32_t domain_ = 0;
};

double squared_loss(double predicted, double actual);
double absolute_loss(double predicted, double actual);

/// What a commitment predicts: a statistic value or a chosen model index.
using CommitmentPayload = std::variant<double, std::size_t>;

/// A prediction event: after observing t entries, predict over the next m.
struct Commitment {
  std::size_t t = 0;
  std::size_t m = 1;
  CommitmentPayload payload = 0.0;

  /// Validates 0 <= t <= n-1 and 1 <= m <= n-t against horizon n.
  static Commitment checked(std::size_t n, std::size_t t, std::size_t m,
                            CommitmentPayload payload);

  bool is_value() const noexcept { return std::holds_alternative<double>(payload); }
  double value() const { return std::get<double>(payload); }
  std::size_t model() const { return std::get<std::size_t>(payload); }
};

/// Outcome of one play of the game.
struct GameResult {
  Commitment commitment;
  double predicted = 0.0;  // value payload, or the chosen model's realized window risk
  double actual = 0.0;     // realized statistic, or the best model's window risk
  double loss = 0.0;
};

}  // namespace selpred
