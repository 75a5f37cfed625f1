#include "selpred/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace selpred {

Sequence Sequence::reals(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("sequence must be nonempty");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("real observation outside [0,1]: " + std::to_string(v));
  }
  Sequence s;
  s.kind_ = ObservationKind::Real;
  s.reals_ = std::move(values);
  return s;
}

Sequence Sequence::symbols(std::vector<std::uint32_t> values, std::uint32_t domain_size) {
  if (values.empty()) throw std::invalid_argument("sequence must be nonempty");
  if (domain_size == 0) throw std::invalid_argument("symbol domain must be positive");
  for (std::uint32_t v : values) {
    if (v >= domain_size)
      throw std::invalid_argument("symbol id " + std::to_string(v) + " outside domain of size " +
                                  std::to_string(domain_size));
  }
  Sequence s;
  s.kind_ = ObservationKind::Symbol;
  s.symbols_ = std::move(values);
  s.domain_ = domain_size;
  return s;
}

std::size_t Sequence::size() const noexcept {
  return is_real() ? reals_.size() : symbols_.size();
}

std::span<const double> Sequence::real_values() const {
  if (!is_real()) throw std::logic_error("sequence holds symbols, not reals");
  return reals_;
}

std::span<const std::uint32_t> Sequence::symbol_values() const {
  if (is_real()) throw std::logic_error("sequence holds reals, not symbols");
  return symbols_;
}

Observation Sequence::at(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("observation index out of range");
  if (is_real()) return Observation{reals_[i]};
  return Observation{symbols_[i]};
}

Slice Sequence::view() const { return view(0, size()); }

Slice Sequence::view(std::size_t offset, std::size_t length) const {
  if (offset > size() || length > size() - offset)
    throw std::out_of_range("slice bounds exceed sequence length");
  if (is_real())
    return Slice(kind_, std::span<const double>(reals_).subspan(offset, length), {}, 0);
  return Slice(kind_, {}, std::span<const std::uint32_t>(symbols_).subspan(offset, length),
               domain_);
}

std::span<const double> Slice::reals() const {
  if (!is_real()) throw std::logic_error("slice holds symbols, not reals");
  return reals_;
}

std::span<const std::uint32_t> Slice::symbols() const {
  if (is_real()) throw std::logic_error("slice holds reals, not symbols");
  return symbols_;
}

Slice Slice::subslice(std::size_t offset, std::size_t length) const {
  if (offset > size() || length > size() - offset)
    throw std::out_of_range("subslice bounds exceed slice length");
  if (is_real()) return Slice(kind_, reals_.subspan(offset, length), {}, 0);
  return Slice(kind_, {}, symbols_.subspan(offset, length), domain_);
}

double squared_loss(double predicted, double actual) {
  const double d = predicted - actual;
  return d * d;
}

double absolute_loss(double predicted, double actual) {
  return std::fabs(predicted - actual);
}

Commitment Commitment::checked(std::size_t n, std::size_t t, std::size_t m,
                               CommitmentPayload payload) {
  if (n == 0) throw std::invalid_argument("horizon must be positive");
  if (t > n - 1) throw std::invalid_argument("prediction time t out of range");
  if (m < 1 || m > n - t) throw std::invalid_argument("window length m out of range");
  return Commitment{t, m, payload};
}

}  // namespace selpred
