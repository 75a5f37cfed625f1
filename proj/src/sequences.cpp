#include "selpred/sequences.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace selpred {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Sequence bits_to_sequence(const std::vector<int>& bits) {
  std::vector<double> v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) v[i] = bits[i] ? 1.0 : 0.0;
  return Sequence::reals(std::move(v));
}

Sequence blocks_to_sequence(const std::vector<std::size_t>& sizes,
                            const std::vector<int>& block_bits) {
  std::vector<double> v;
  for (std::size_t b = 0; b < sizes.size(); ++b)
    v.insert(v.end(), sizes[b], block_bits[b] ? 1.0 : 0.0);
  return Sequence::reals(std::move(v));
}

std::vector<WeightedSequence> enumerate_block_outcomes(
    const std::vector<std::size_t>& sizes) {
  const std::size_t blocks = sizes.size();
  if (blocks > 16)
    throw std::invalid_argument("block enumeration guarded to 16 blocks");
  const std::size_t count = std::size_t{1} << blocks;
  const double p = 1.0 / static_cast<double>(count);
  std::vector<WeightedSequence> out;
  out.reserve(count);
  std::vector<int> bits(blocks);
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (std::size_t b = 0; b < blocks; ++b) bits[b] = (mask >> b) & 1u;
    out.push_back({blocks_to_sequence(sizes, bits), p});
  }
  return out;
}

}  // namespace

Sequence TreeSample::leaves() const {
  const auto& row = levels.back();
  return Sequence::reals(std::vector<double>(row.begin(), row.end()));
}

double tree_value(std::size_t level, int sign, std::size_t k) {
  // sqrt(level) * delta written as (1/2) sqrt(level/k), which is exactly 1/2
  // at the leaf level and never exceeds it above.
  const double spread =
      0.5 * std::sqrt(static_cast<double>(level) / static_cast<double>(k));
  return 0.5 + (sign >= 0 ? spread : -spread);
}

double tree_up_probability(std::size_t level, int parent_sign) {
  if (level < 1) throw std::invalid_argument("transition defined for levels >= 1");
  const double ratio = std::sqrt(static_cast<double>(level - 1) / static_cast<double>(level));
  return 0.5 + (parent_sign >= 0 ? 0.5 * ratio : -0.5 * ratio);
}

TreeSample sample_tree(std::size_t k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("tree height must be >= 1");
  TreeSample tree;
  tree.height = k;
  tree.delta = 1.0 / (2.0 * std::sqrt(static_cast<double>(k)));
  tree.levels.resize(k + 1);
  tree.levels[0] = {0.5};

  std::vector<int> parent_signs = {+1};  // unused at level 1 where sqrt(0) = 0
  for (std::size_t j = 1; j <= k; ++j) {
    const std::size_t width = std::size_t{1} << j;
    std::vector<int> signs(width);
    tree.levels[j].resize(width);
    for (std::size_t idx = 0; idx < width; ++idx) {
      const double up = tree_up_probability(j, parent_signs[idx / 2]);
      signs[idx] = rng.uniform01() < up ? +1 : -1;
      tree.levels[j][idx] = tree_value(j, signs[idx], k);
    }
    parent_signs = std::move(signs);
  }
  return tree;
}

SequenceSource anti_concentrated_source(std::size_t k) {
  if (k < 1) throw std::invalid_argument("tree height must be >= 1");
  SequenceSource src;
  src.name = "anti-concentrated";
  src.length = std::size_t{1} << k;
  src.sample = [k](Rng& rng) {
    // Level-by-level walk keeping only the current sign row, so large trees
    // never materialize in full.
    std::vector<int> parent_signs = {+1};
    for (std::size_t j = 1; j <= k; ++j) {
      const std::size_t width = std::size_t{1} << j;
      std::vector<int> signs(width);
      for (std::size_t idx = 0; idx < width; ++idx) {
        const double up = tree_up_probability(j, parent_signs[idx / 2]);
        signs[idx] = rng.uniform01() < up ? +1 : -1;
      }
      parent_signs = std::move(signs);
    }
    std::vector<double> leaves(parent_signs.size());
    for (std::size_t i = 0; i < leaves.size(); ++i)
      leaves[i] = tree_value(k, parent_signs[i], k);
    return Sequence::reals(std::move(leaves));
  };
  if (k <= 3) src.enumerate = [k]() { return enumerate_anti_concentrated(k); };
  return src;
}

std::vector<WeightedSequence> enumerate_anti_concentrated(std::size_t k) {
  if (k < 1) throw std::invalid_argument("tree height must be >= 1");
  if (k > 3) throw std::invalid_argument("tree enumeration guarded to k <= 3");

  // Non-root nodes indexed breadth-first: level j occupies bit offset
  // 2^j - 2 onward. Each bit is that node's sign choice.
  const std::size_t node_count = (std::size_t{2} << k) - 2;
  const std::size_t outcomes = std::size_t{1} << node_count;
  const std::size_t n = std::size_t{1} << k;

  std::vector<WeightedSequence> out;
  out.reserve(outcomes);
  for (std::size_t mask = 0; mask < outcomes; ++mask) {
    double probability = 1.0;
    std::vector<int> parent_signs = {+1};
    std::vector<int> signs;
    for (std::size_t j = 1; j <= k; ++j) {
      const std::size_t width = std::size_t{1} << j;
      const std::size_t offset = width - 2;
      signs.assign(width, 0);
      for (std::size_t idx = 0; idx < width; ++idx) {
        const int sign = (mask >> (offset + idx)) & 1u ? +1 : -1;
        const double up = tree_up_probability(j, parent_signs[idx / 2]);
        probability *= sign > 0 ? up : 1.0 - up;
        signs[idx] = sign;
      }
      parent_signs = signs;
    }
    std::vector<double> leaves(n);
    for (std::size_t i = 0; i < n; ++i) leaves[i] = tree_value(k, signs[i], k);
    out.push_back({Sequence::reals(std::move(leaves)), probability});
  }
  return out;
}

SequenceSource fixed_time_adversary(std::size_t n, std::size_t t) {
  if (n < 1) throw std::invalid_argument("length must be >= 1");
  if (t > n - 1) throw std::invalid_argument("prediction time t out of range");
  SequenceSource src;
  src.name = "fixed-time";
  src.length = n;
  src.sample = [n, t](Rng& rng) {
    std::vector<int> bits(n, 0);
    const int b = rng.bit();
    for (std::size_t i = t; i < n; ++i) bits[i] = b;
    return bits_to_sequence(bits);
  };
  src.enumerate = [n, t]() {
    std::vector<WeightedSequence> out;
    for (int b : {0, 1}) {
      std::vector<int> bits(n, 0);
      for (std::size_t i = t; i < n; ++i) bits[i] = b;
      out.push_back({bits_to_sequence(bits), 0.5});
    }
    return out;
  };
  return src;
}

std::vector<std::size_t> block_layout(std::size_t n, std::size_t m) {
  if (n < 1) throw std::invalid_argument("length must be >= 1");
  if (m < 1 || m > n) throw std::invalid_argument("window length m out of range");
  const std::size_t half = (m + 1) / 2;
  std::vector<std::size_t> sizes;
  for (std::size_t start = 0; start < n; start += half)
    sizes.push_back(std::min(half, n - start));
  return sizes;
}

SequenceSource block_adversary(std::size_t n, std::size_t m) {
  const auto sizes = block_layout(n, m);
  SequenceSource src;
  src.name = "block";
  src.length = n;
  src.sample = [sizes](Rng& rng) {
    std::vector<int> bits(sizes.size());
    for (auto& b : bits) b = rng.bit();
    return blocks_to_sequence(sizes, bits);
  };
  if (sizes.size() <= 16)
    src.enumerate = [sizes]() { return enumerate_block_outcomes(sizes); };
  return src;
}

std::vector<std::size_t> halving_block_layout(std::size_t n) {
  if (n < 2 || !is_power_of_two(n))
    throw std::invalid_argument("length must be a power of two >= 2");
  std::vector<std::size_t> sizes;
  for (std::size_t s = n / 2; s >= 1; s /= 2) sizes.push_back(s);
  sizes.push_back(1);  // sizes n/2 ... 1 cover n-1 slots; one slot remains
  return sizes;
}

SequenceSource halving_block_adversary(std::size_t n) {
  const auto sizes = halving_block_layout(n);
  SequenceSource src;
  src.name = "halving-block";
  src.length = n;
  src.sample = [sizes](Rng& rng) {
    std::vector<int> bits(sizes.size());
    for (auto& b : bits) b = rng.bit();
    return blocks_to_sequence(sizes, bits);
  };
  if (sizes.size() <= 16)
    src.enumerate = [sizes]() { return enumerate_block_outcomes(sizes); };
  return src;
}

ErmHardInstance erm_hard_instance(std::size_t k) {
  if (k < 2) throw std::invalid_argument("hard instance requires k >= 2");
  if (k > 31) throw std::invalid_argument("hard instance domain would overflow");
  const std::size_t n = std::size_t{1} << k;
  const double epsilon = 1.0 / (4.0 * static_cast<double>(k));

  std::vector<std::vector<double>> tables(k, std::vector<double>(n));
  for (std::size_t i = 1; i <= k; ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      const bool odd = (x >> (i - 1)) & 1u;
      tables[i - 1][x] = odd ? 1.0 : static_cast<double>(i) * epsilon;
    }
  }

  std::vector<std::uint32_t> symbols(n);
  for (std::size_t x = 0; x < n; ++x) symbols[x] = static_cast<std::uint32_t>(x);

  return ErmHardInstance{ModelClass::checked(std::move(tables)),
                         Sequence::symbols(std::move(symbols), static_cast<std::uint32_t>(n)),
                         epsilon};
}

SequenceSource constant_source(std::size_t n, double value) {
  if (n < 1) throw std::invalid_argument("length must be >= 1");
  if (!(value >= 0.0 && value <= 1.0))
    throw std::invalid_argument("constant value outside [0,1]");
  SequenceSource src;
  src.name = "constant";
  src.length = n;
  src.sample = [n, value](Rng&) { return Sequence::reals(std::vector<double>(n, value)); };
  src.enumerate = [n, value]() {
    return std::vector<WeightedSequence>{
        {Sequence::reals(std::vector<double>(n, value)), 1.0}};
  };
  return src;
}

SequenceSource alternating_source(std::size_t n) {
  if (n < 1) throw std::invalid_argument("length must be >= 1");
  SequenceSource src;
  src.name = "alternating";
  src.length = n;
  auto make = [n]() {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i % 2);
    return Sequence::reals(std::move(v));
  };
  src.sample = [make](Rng&) { return make(); };
  src.enumerate = [make]() { return std::vector<WeightedSequence>{{make(), 1.0}}; };
  return src;
}

SequenceSource iid_uniform_bits(std::size_t n) {
  if (n < 1) throw std::invalid_argument("length must be >= 1");
  SequenceSource src;
  src.name = "iid-bits";
  src.length = n;
  src.sample = [n](Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng.bit());
    return Sequence::reals(std::move(v));
  };
  return src;
}

SequenceSource iid_uniform_reals(std::size_t n) {
  if (n < 1) throw std::invalid_argument("length must be >= 1");
  SequenceSource src;
  src.name = "iid-reals";
  src.length = n;
  src.sample = [n](Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform01();
    return Sequence::reals(std::move(v));
  };
  return src;
}

SequenceSource iid_uniform_symbols(std::size_t n, std::uint32_t domain) {
  if (n < 1) throw std::invalid_argument("length must be >= 1");
  if (domain == 0) throw std::invalid_argument("symbol domain must be positive");
  SequenceSource src;
  src.name = "iid-symbols";
  src.length = n;
  src.sample = [n, domain](Rng& rng) {
    std::vector<std::uint32_t> v(n);
    for (auto& x : v) x = static_cast<std::uint32_t>(rng.below(domain));
    return Sequence::symbols(std::move(v), domain);
  };
  return src;
}

void write_sequence_csv(const Sequence& sequence, std::ostream& out) {
  out << "index,value\n";
  char buf[64];
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence.is_real()) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, sequence.real_values()[i]);
    } else {
      std::snprintf(buf, sizeof buf, "%zu,%u\n", i, sequence.symbol_values()[i]);
    }
    out << buf;
  }
}

Sequence read_sequence_csv(std::istream& in, ObservationKind kind, std::uint32_t domain) {
  std::vector<double> reals;
  std::vector<std::uint32_t> symbols;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("index", 0) == 0) continue;  // header row
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("malformed sequence CSV row: " + line);
    const std::string field = line.substr(comma + 1);
    if (kind == ObservationKind::Real) {
      reals.push_back(std::strtod(field.c_str(), nullptr));
    } else {
      symbols.push_back(static_cast<std::uint32_t>(std::strtoul(field.c_str(), nullptr, 10)));
    }
  }
  if (kind == ObservationKind::Real) return Sequence::reals(std::move(reals));
  return Sequence::symbols(std::move(symbols), domain);
}

std::vector<double> block_means(std::span<const double> values, std::size_t width,
                                std::size_t count) {
  if (width < 1) throw std::invalid_argument("block width must be positive");
  const std::size_t available = values.size() / width;
  const std::size_t blocks = std::min(count, available);
  std::vector<double> means(blocks);
  for (std::size_t b = 0; b < blocks; ++b)
    means[b] = arithmetic_mean(values.subspan(b * width, width));
  return means;
}

}  // namespace selpred
