// Timing comparison between the serial reference paths and the OpenMP
// kernels. Both must agree bit for bit; this binary reports the speedups.

#include <chrono>
#include <limits>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "selpred/engine.hpp"

using namespace selpred;

namespace {

double time_of(const std::function<double()>& body, double* checksum) {
  *checksum = body();  // warmup
  double best = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 5; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    *checksum = body();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    best = std::min(best, elapsed);
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
  std::printf("%-34s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   %s\n", name,
              serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
              identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; both columns run serially\n\n");
#endif

  const StatisticFamily family = mean_family();
  const GameSpec spec{&family, nullptr, Loss::Squared};

  {
    const std::size_t k = 14;
    Rng rng(1);
    const Sequence seq = iid_uniform_reals(std::size_t{1} << k).sample(rng);
    const Predictor p = selective_predictor(family, k);
    double a = 0.0, b = 0.0;
    const double ts = time_of(
        [&] { return exact_expected_loss(seq, p, spec, Execution::Serial); }, &a);
    const double tp = time_of(
        [&] { return exact_expected_loss(seq, p, spec, Execution::Parallel); }, &b);
    report("exact expectation (mean, k=14)", ts, tp, a == b);

    double c = 0.0, d = 0.0;
    const double ks = time_of(
        [&] { return selective_mean_exact_loss(seq.real_values(), k, Execution::Serial); },
        &c);
    const double kp = time_of(
        [&] {
          return selective_mean_exact_loss(seq.real_values(), k, Execution::Parallel);
        },
        &d);
    report("mean prefix-sum kernel (k=14)", ks, kp, c == d);
    std::printf("  generic route %.3f ms vs kernel %.3f ms (%.1fx), |diff| = %.2e\n\n",
                ts * 1e3, ks * 1e3, ts / ks, a > c ? a - c : c - a);
  }

  {
    const std::size_t k = 12;
    const SequenceSource source = anti_concentrated_source(k);
    const Predictor p = selective_predictor(family, k);
    double a = 0.0, b = 0.0;
    const double ts = time_of(
        [&] { return monte_carlo(source, p, spec, 5000, 42, 0, Execution::Serial).mean; },
        &a);
    const double tp = time_of(
        [&] { return monte_carlo(source, p, spec, 5000, 42, 0, Execution::Parallel).mean; },
        &b);
    report("monte carlo (tree k=12, 5000)", ts, tp, a == b);
  }

  {
    const SequenceSource source = anti_concentrated_source(3);
    double a = 0.0, b = 0.0;
    const double ts = time_of(
        [&] {
          return min_conditional_variance(source, {ConstraintKind::AllPairs, 0},
                                          Execution::Serial)
              .certificate.min_variance;
        },
        &a);
    const double tp = time_of(
        [&] {
          return min_conditional_variance(source, {ConstraintKind::AllPairs, 0},
                                          Execution::Parallel)
              .certificate.min_variance;
        },
        &b);
    report("variance scan (tree k=3)", ts, tp, a == b);
  }

  {
    const SequenceSource source = block_adversary(16, 2);
    double a = 0.0, b = 0.0;
    const double ts = time_of(
        [&] {
          return min_conditional_variance(source, {ConstraintKind::FixedWindow, 2},
                                          Execution::Serial)
              .certificate.min_variance;
        },
        &a);
    const double tp = time_of(
        [&] {
          return min_conditional_variance(source, {ConstraintKind::FixedWindow, 2},
                                          Execution::Parallel)
              .certificate.min_variance;
        },
        &b);
    report("variance scan (block n=16)", ts, tp, a == b);
  }

  return 0;
}
