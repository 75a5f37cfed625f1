#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "selpred/core.hpp"
#include "selpred/rng.hpp"
#include "selpred/statistics.hpp"

namespace selpred {

struct WeightedSequence {
  Sequence sequence;
  double probability = 0.0;
};

/// A deterministic or stochastic sequence generator. Sampling consumes an
/// externally supplied rng, so parallel trials use independent states.
/// enumerate (when set) lists every outcome with its probability.
struct SequenceSource {
  std::string name;
  std::size_t length = 0;
  std::function<Sequence(Rng&)> sample;
  std::function<std::vector<WeightedSequence>()> enumerate;

  bool enumerable() const { return static_cast<bool>(enumerate); }
};

/// One realization of the multiscale binary-tree construction: level j holds
/// 2^j values, each 1/2 +- spread(j), with the root pinned at 1/2.
struct TreeSample {
  std::size_t height = 0;  // k; leaves are level k
  double delta = 0.0;      // per-step spread unit 1/(2 sqrt k)
  std::vector<std::vector<double>> levels;

  Sequence leaves() const;
};

/// Node value at a given level: 1/2 + sign * (1/2) * sqrt(j/k).
/// Computed so leaves land exactly on {0,1} and every level stays in [0,1].
double tree_value(std::size_t level, int sign, std::size_t k);

/// Probability that a level-j node takes the + sign, given its parent's sign.
/// At j = 1 both signs are equally likely regardless of the parent.
double tree_up_probability(std::size_t level, int parent_sign);

/// Draws a full tree, breadth-first and left-to-right, one rng draw per node.
TreeSample sample_tree(std::size_t k, Rng& rng);

/// Length-2^k source of tree leaf rows; anti-concentrated at every scale.
SequenceSource anti_concentrated_source(std::size_t k);

/// Exact enumeration over all binary sign choices of the non-root nodes
/// (2^(2^(k+1)-2) entries; entries with equal leaf rows are kept distinct).
/// Guarded to k <= 3.
std::vector<WeightedSequence> enumerate_anti_concentrated(std::size_t k);

/// Zero prefix of length t, then a constant tail drawn uniformly from {0,1}.
SequenceSource fixed_time_adversary(std::size_t n, std::size_t t);

/// Blocks of length ceil(m/2) (last one possibly truncated), each block an
/// independent uniform bit.
SequenceSource block_adversary(std::size_t n, std::size_t m);

/// Blocks of sizes n/2, n/4, ..., 2, 1, 1, each an independent uniform bit.
/// Requires n a power of two, n >= 2.
SequenceSource halving_block_adversary(std::size_t n);

/// Block sizes used by block_adversary.
std::vector<std::size_t> block_layout(std::size_t n, std::size_t m);
/// Block sizes used by halving_block_adversary.
std::vector<std::size_t> halving_block_layout(std::size_t n);

struct ErmHardInstance {
  ModelClass models;   // k tables over symbols {0, ..., 2^k - 1}
  Sequence sequence;   // the identity sequence 0, 1, ..., 2^k - 1
  double epsilon = 0;  // 1/(4k)
};

/// Deterministic instance on which empirical risk minimization over half
/// windows incurs constant excess risk. Requires k >= 2.
ErmHardInstance erm_hard_instance(std::size_t k);

SequenceSource constant_source(std::size_t n, double value);
SequenceSource alternating_source(std::size_t n);
SequenceSource iid_uniform_bits(std::size_t n);
SequenceSource iid_uniform_reals(std::size_t n);
SequenceSource iid_uniform_symbols(std::size_t n, std::uint32_t domain);

/// CSV round trip: rows of (index, value); reals serialized with 17
/// significant digits so they reparse bit-exactly.
void write_sequence_csv(const Sequence& sequence, std::ostream& out);
Sequence read_sequence_csv(std::istream& in, ObservationKind kind,
                           std::uint32_t domain = 0);

/// Means of the first `count` non-overlapping blocks of the given width
/// (fewer if the input is short).
std::vector<double> block_means(std::span<const double> values, std::size_t width,
                                std::size_t count);

}  // namespace selpred
