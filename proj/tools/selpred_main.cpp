// Command-line front end: named, reproducible experiments over the selective
// prediction engine, CSV output, and the verification suite.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "selpred/acceptance.hpp"
#include "selpred/engine.hpp"

namespace {

using namespace selpred;

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

enum class Direction { Upper, Lower };

struct RunConfig {
  std::string experiment;
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  std::string source;
  std::string predictor;
  std::string family;
  std::uint64_t trials = 0;
  std::uint64_t seed = 42;
  bool exact = false;
  bool exact_set = false;
  std::string out;
  std::uint64_t t0 = 0;
  bool has_t0 = false;
  std::uint64_t m = 0;
  bool has_m = false;
  double value = 0.5;
  std::uint64_t models = 8;
  std::uint64_t symbols = 12;
};

std::size_t floor_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{2} << k) <= n) ++k;
  return k;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

struct ExperimentPreset {
  std::string source;
  std::string predictor;
  std::string family;
  Loss loss = Loss::Squared;
  bool exact = true;
  Direction direction = Direction::Upper;
};

std::optional<ExperimentPreset> preset_for(const std::string& name) {
  if (name == "mean-upper")
    return ExperimentPreset{"anti-concentrated", "selective", "mean", Loss::Squared, true,
                            Direction::Upper};
  if (name == "mean-lower")
    return ExperimentPreset{"anti-concentrated", "selective", "mean", Loss::Squared, false,
                            Direction::Lower};
  if (name == "smooth-upper")
    return ExperimentPreset{"anti-concentrated", "selective", "square-mean", Loss::Absolute,
                            true, Direction::Upper};
  if (name == "concave-upper")
    return ExperimentPreset{"iid-symbols", "selective", "learnability", Loss::Squared, true,
                            Direction::Upper};
  if (name == "erm-upper")
    return ExperimentPreset{"iid-symbols", "erm", "", Loss::Squared, true, Direction::Upper};
  if (name == "erm-lower")
    return ExperimentPreset{"erm-hard", "erm", "", Loss::Squared, true, Direction::Lower};
  return std::nullopt;
}

int cmd_run(RunConfig cfg) {
  const auto preset = preset_for(cfg.experiment);
  if (!preset) {
    std::cerr << "unknown experiment: " << cfg.experiment << "\n";
    return kExitUsage;
  }
  if (cfg.source.empty()) cfg.source = preset->source;
  if (cfg.predictor.empty()) cfg.predictor = preset->predictor;
  if (cfg.family.empty()) cfg.family = preset->family;
  const bool exact = cfg.exact_set ? cfg.exact : preset->exact;

  if (cfg.k == 0 && cfg.n == 0) {
    std::cerr << "one of --k or --n is required\n";
    return kExitUsage;
  }
  if (cfg.k != 0 && cfg.n != 0 && cfg.n != (std::uint64_t{1} << cfg.k)) {
    std::cerr << "inconsistent --k/--n: need n = 2^k (pass --n alone for general lengths)\n";
    return kExitUsage;
  }
  if (cfg.n == 0) cfg.n = std::uint64_t{1} << cfg.k;
  if (cfg.k == 0) cfg.k = floor_log2(cfg.n);
  if (cfg.n < 2) {
    std::cerr << "need a horizon of at least 2\n";
    return kExitUsage;
  }
  const std::size_t k = cfg.k;
  const std::size_t n = cfg.n;

  // model class, when the family or predictor needs one
  ErmHardInstance hard = cfg.source == "erm-hard" || cfg.experiment == "erm-lower"
                             ? erm_hard_instance(std::max<std::size_t>(k, 2))
                             : ErmHardInstance{ModelClass::checked({{0.0}}),
                                               Sequence::symbols({0}, 1), 0.0};
  const bool use_hard = cfg.source == "erm-hard";
  ModelClass models = use_hard ? hard.models : [&] {
    Rng rng(mix_seed(cfg.seed, 7777));
    std::vector<std::vector<double>> tables(cfg.models,
                                            std::vector<double>(cfg.symbols));
    for (auto& table : tables)
      for (auto& v : table) v = rng.uniform01();
    return ModelClass::checked(std::move(tables));
  }();

  StatisticFamily family;
  if (cfg.family == "mean" || cfg.family.empty())
    family = mean_family();
  else if (cfg.family == "square-mean")
    family = square_mean_family();
  else if (cfg.family == "half-distance")
    family = half_distance_family();
  else if (cfg.family == "emd-ref")
    family = emd_to_reference_family({0.0, 1.0});
  else if (cfg.family == "learnability")
    family = learnability_family(models);
  else {
    std::cerr << "unknown family: " << cfg.family << "\n";
    return kExitUsage;
  }

  SequenceSource source;
  if (cfg.source == "anti-concentrated")
    source = anti_concentrated_source(k);
  else if (cfg.source == "iid-bits")
    source = iid_uniform_bits(n);
  else if (cfg.source == "iid-reals")
    source = iid_uniform_reals(n);
  else if (cfg.source == "iid-symbols")
    source = iid_uniform_symbols(n, models.domain_size());
  else if (cfg.source == "alternating")
    source = alternating_source(n);
  else if (cfg.source == "constant")
    source = constant_source(n, cfg.value);
  else if (cfg.source == "fixed-time") {
    if (!cfg.has_t0) {
      std::cerr << "--t is required for the fixed-time source\n";
      return kExitUsage;
    }
    source = fixed_time_adversary(n, cfg.t0);
  } else if (cfg.source == "block") {
    if (!cfg.has_m) {
      std::cerr << "--m is required for the block source\n";
      return kExitUsage;
    }
    source = block_adversary(n, cfg.m);
  } else if (cfg.source == "halving-block")
    source = halving_block_adversary(n);
  else if (cfg.source == "erm-hard") {
    source.name = "erm-hard";
    source.length = hard.sequence.size();
    const Sequence seq = hard.sequence;
    source.sample = [seq](Rng&) { return seq; };
    source.enumerate = [seq]() { return std::vector<WeightedSequence>{{seq, 1.0}}; };
  } else {
    std::cerr << "unknown source: " << cfg.source << "\n";
    return kExitUsage;
  }

  const std::size_t horizon = source.length;
  const std::size_t horizon_k = floor_log2(horizon);
  Predictor predictor = [&]() -> Predictor {
    if (cfg.predictor == "selective") {
      Predictor base = selective_predictor(family, horizon_k);
      return horizon == (std::size_t{1} << horizon_k) ? std::move(base)
                                                      : wrap_general_length(std::move(base), horizon);
    }
    if (cfg.predictor == "erm") {
      Predictor base = erm_predictor(models, horizon_k);
      return horizon == (std::size_t{1} << horizon_k) ? std::move(base)
                                                      : wrap_general_length(std::move(base), horizon);
    }
    if (cfg.predictor == "fixed-time") {
      if (!cfg.has_t0) throw CLI::ValidationError("--t is required for fixed-time");
      return fixed_time_predictor(horizon, cfg.t0);
    }
    if (cfg.predictor == "fixed-window") {
      if (!cfg.has_m) throw CLI::ValidationError("--m is required for fixed-window");
      return fixed_window_predictor(horizon, cfg.m);
    }
    if (cfg.predictor == "tail-window") return tail_window_predictor(horizon);
    throw CLI::ValidationError("unknown predictor: " + cfg.predictor);
  }();

  GameSpec spec;
  spec.loss = preset->loss;
  if (cfg.predictor == "erm")
    spec.models = &models;
  else
    spec.family = &family;

  // the guarantee this experiment checks
  double bound = 0.0;
  std::string bound_name;
  const double kd = static_cast<double>(horizon_k);
  if (cfg.experiment == "mean-upper") {
    bound = 1.0 / kd;
    bound_name = "1/k";
  } else if (cfg.experiment == "mean-lower") {
    bound = 1.0 / (64.0 * kd);
    bound_name = "1/(64k)";
  } else if (cfg.experiment == "smooth-upper") {
    bound = family.smoothness.value_or(1.0) / std::sqrt(kd);
    bound_name = "L/sqrt(k)";
  } else if (cfg.experiment == "concave-upper") {
    bound = 4.0 / kd;
    bound_name = "4/k";
  } else if (cfg.experiment == "erm-upper") {
    bound = 2.0 * std::sqrt(static_cast<double>(models.size()) / kd);
    bound_name = "2*sqrt(|L|/k)";
  } else {
    bound = 0.125;
    bound_name = "1/8";
  }

  std::map<std::string, std::string> meta = {
      {"experiment", cfg.experiment}, {"k", std::to_string(horizon_k)},
      {"n", std::to_string(horizon)}, {"source", source.name},
      {"predictor", predictor.name()}, {"family", family.name},
      {"seed", std::to_string(cfg.seed)}, {"mode", exact ? "exact" : "monte-carlo"}};

  double measured = 0.0;
  double ci = 0.0;
  std::string csv;
  if (exact && source.enumerable()) {
    const auto outcomes = source.enumerate();
    std::vector<SupportRow> rows;
    for (const auto& outcome : outcomes) {
      const double loss = exact_expected_loss(outcome.sequence, predictor, spec);
      measured += outcome.probability * loss;
      rows.push_back(SupportRow{outcome.probability, -1, 0, 0, 0.0, 0.0, loss});
    }
    meta["trials"] = "0";
    if (outcomes.size() == 1) {
      // deterministic sequence: emit the full support breakdown
      rows = exact_support_rows(outcomes[0].sequence, predictor, spec);
    }
    std::ostringstream out;
    write_exact_csv(cfg.experiment, rows, meta, out);
    csv = out.str();
  } else if (exact) {
    const std::size_t trials = cfg.trials ? cfg.trials : 2000;
    meta["trials"] = std::to_string(trials);
    TrialReport report;
    report.experiment = cfg.experiment;
    report.trials = trials;
    report.master_seed = cfg.seed;
    report.losses.resize(trials);
    report.records.resize(trials);
    for (std::size_t i = 0; i < trials; ++i) {
      Rng rng(mix_seed(cfg.seed, i));
      const Sequence seq = source.sample(rng);
      const double loss = exact_expected_loss(seq, predictor, spec);
      report.losses[i] = loss;
      report.records[i] = PlayRecord{i, -1, 0, 0, 0.0, 0.0, loss};
    }
    double sum = 0.0;
    for (double l : report.losses) sum += l;
    report.mean = sum / static_cast<double>(trials);
    report.ci_half_width = trials > 1 ? 1.96 * sample_stddev(report.losses) /
                                            std::sqrt(static_cast<double>(trials))
                                      : 0.0;
    measured = report.mean;
    ci = report.ci_half_width;
    std::ostringstream out;
    write_report_csv(report, meta, out);
    csv = out.str();
  } else {
    const std::size_t trials = cfg.trials ? cfg.trials : 10000;
    meta["trials"] = std::to_string(trials);
    const TrialReport report = monte_carlo(source, predictor, spec, trials, cfg.seed);
    measured = report.mean;
    ci = report.ci_half_width;
    std::ostringstream out;
    write_report_csv(report, meta, out);
    csv = out.str();
  }

  // exact checks get tolerance slack, Monte Carlo checks get 3 ci half-widths
  const double slack = exact ? 1e-9 : 3.0 * ci;
  const bool pass = preset->direction == Direction::Upper ? measured <= bound + slack
                                                          : measured >= bound - slack;
  char line[256];
  std::snprintf(line, sizeof line,
                "experiment=%s k=%zu n=%zu measured=%.6g ci=%.3g bound[%s]=%.6g (%s): %s\n",
                cfg.experiment.c_str(), horizon_k, horizon, measured, ci,
                bound_name.c_str(), bound,
                preset->direction == Direction::Upper ? "upper" : "lower",
                pass ? "PASS" : "FAIL");
  std::cout << line;

  if (!cfg.out.empty() && !write_file(cfg.out, csv)) {
    std::cerr << "failed to write " << cfg.out << "\n";
    return kExitFailure;
  }
  return pass ? kExitPass : kExitFailure;
}

struct CertifyConfig {
  std::string source;
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  std::uint64_t t0 = 0;
  bool has_t0 = false;
  std::uint64_t m = 0;
  bool has_m = false;
  std::string out;
};

int cmd_certify(const CertifyConfig& cfg) {
  SequenceSource source;
  Constraint constraint;
  double bound = 0.0;
  std::string bound_name;

  if (cfg.source == "anti-concentrated") {
    if (cfg.k == 0) {
      std::cerr << "--k is required for the anti-concentrated source\n";
      return kExitUsage;
    }
    if (cfg.k > 3) {
      std::cerr << "enumeration guard: anti-concentrated certification is limited to k <= 3\n";
      return kExitUsage;
    }
    source = anti_concentrated_source(cfg.k);
    constraint = {ConstraintKind::AllPairs, 0};
    bound = 1.0 / (64.0 * static_cast<double>(cfg.k));
    bound_name = "1/(64k)";
  } else if (cfg.source == "fixed-time") {
    if (cfg.n == 0 || !cfg.has_t0) {
      std::cerr << "--n and --t are required for the fixed-time source\n";
      return kExitUsage;
    }
    source = fixed_time_adversary(cfg.n, cfg.t0);
    constraint = {ConstraintKind::FixedTime, cfg.t0};
    bound = 0.25;
    bound_name = "1/4";
  } else if (cfg.source == "block") {
    if (cfg.n == 0 || !cfg.has_m) {
      std::cerr << "--n and --m are required for the block source\n";
      return kExitUsage;
    }
    if (block_layout(cfg.n, cfg.m).size() > 16) {
      std::cerr << "enumeration guard: block certification is limited to 16 blocks\n";
      return kExitUsage;
    }
    source = block_adversary(cfg.n, cfg.m);
    constraint = {ConstraintKind::FixedWindow, cfg.m};
    bound = 1.0 / 64.0;
    bound_name = "1/64";
  } else if (cfg.source == "halving-block") {
    if (cfg.n == 0) {
      std::cerr << "--n is required for the halving-block source\n";
      return kExitUsage;
    }
    source = halving_block_adversary(cfg.n);
    constraint = {ConstraintKind::TailOnly, 0};
    bound = 1.0 / 64.0;
    bound_name = "1/64";
  } else {
    std::cerr << "unknown source: " << cfg.source << "\n";
    return kExitUsage;
  }

  const VarianceScan scan = min_conditional_variance(source, constraint);
  const bool pass = scan.certificate.min_variance >= bound - 1e-9;
  char line[256];
  std::snprintf(line, sizeof line,
                "source=%s n=%zu min_variance=%.6g at (t=%zu,m=%zu) bound[%s]=%.6g: %s\n",
                source.name.c_str(), scan.certificate.n, scan.certificate.min_variance,
                scan.certificate.argmin_t, scan.certificate.argmin_m, bound_name.c_str(),
                bound, pass ? "PASS" : "FAIL");
  std::cout << line;

  if (!cfg.out.empty()) {
    std::ostringstream out;
    write_variance_csv(scan, {{"source", source.name}, {"n", std::to_string(source.length)}},
                       out);
    if (!write_file(cfg.out, out.str())) {
      std::cerr << "failed to write " << cfg.out << "\n";
      return kExitFailure;
    }
  }
  return pass ? kExitPass : kExitFailure;
}

int cmd_figures(std::uint64_t k, std::uint64_t seed, const std::string& out) {
  if (k < 16) {
    std::cerr << "figure data requires k >= 16\n";
    return kExitUsage;
  }
  const std::string csv = figure_csv(k, seed);
  if (out.empty()) {
    std::cout << csv;
  } else if (!write_file(out, csv)) {
    std::cerr << "failed to write " << out << "\n";
    return kExitFailure;
  }
  return kExitPass;
}

int cmd_suite(std::uint64_t seed, const std::string& out_dir, std::vector<int> criteria) {
  AcceptanceOptions options;
  options.seed = seed;
  options.artifact_dir = out_dir;
  options.only = std::move(criteria);
  const auto results = run_acceptance(options, std::cout);
  return all_passed(results) ? kExitPass : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selective prediction experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file; command-line flags take precedence");

  RunConfig run_cfg;
  CLI::App* run = app.add_subcommand("run", "run a named experiment and check its bound");
  run->add_option("--experiment", run_cfg.experiment,
                  "mean-upper | mean-lower | smooth-upper | concave-upper | erm-upper | erm-lower")
      ->required();
  run->add_option("--k", run_cfg.k, "horizon exponent (n = 2^k)");
  run->add_option("--n", run_cfg.n, "horizon length (general lengths run on the 2^k prefix)");
  run->add_option("--source", run_cfg.source, "sequence source override");
  run->add_option("--predictor", run_cfg.predictor, "predictor override");
  run->add_option("--family", run_cfg.family, "statistic family override");
  run->add_option("--trials", run_cfg.trials, "trial count");
  run->add_option("--seed", run_cfg.seed, "master seed");
  auto* exact_flag = run->add_flag("--exact,--exact-over-predictor", run_cfg.exact,
                                   "expectation over predictor randomness instead of sampling");
  run->add_option("--out", run_cfg.out, "CSV output path");
  auto* run_t = run->add_option("--t", run_cfg.t0, "fixed prediction time");
  auto* run_m = run->add_option("--m", run_cfg.m, "fixed window length");
  run->add_option("--value", run_cfg.value, "constant source value");
  run->add_option("--models", run_cfg.models, "random model class size");
  run->add_option("--symbols", run_cfg.symbols, "symbol domain size");

  CertifyConfig cert_cfg;
  CLI::App* certify =
      app.add_subcommand("certify", "enumerate a source and certify its variance floor");
  certify->add_option("--source", cert_cfg.source,
                      "anti-concentrated | fixed-time | block | halving-block")
      ->required();
  certify->add_option("--k", cert_cfg.k, "tree height (anti-concentrated)");
  certify->add_option("--n", cert_cfg.n, "sequence length");
  auto* cert_t = certify->add_option("--t", cert_cfg.t0, "fixed prediction time");
  auto* cert_m = certify->add_option("--m", cert_cfg.m, "fixed window length");
  certify->add_option("--out", cert_cfg.out, "CSV output path");

  std::uint64_t fig_k = 20, fig_seed = 42;
  std::string fig_out;
  CLI::App* figures = app.add_subcommand("figures", "emit multiscale block-mean figure data");
  figures->add_option("--k", fig_k, "sequence length exponent (>= 16)");
  figures->add_option("--seed", fig_seed, "seed");
  figures->add_option("--out", fig_out, "CSV output path");

  std::uint64_t suite_seed = 42;
  std::string suite_out = "suite-out";
  std::vector<int> suite_criteria;
  CLI::App* suite = app.add_subcommand("suite", "run the full verification suite");
  suite->add_option("--seed", suite_seed, "master seed");
  suite->add_option("--out", suite_out, "artifact output directory");
  suite->add_option("--criteria", suite_criteria, "criterion ids to run (default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  run_cfg.has_t0 = run_t->count() > 0;
  run_cfg.has_m = run_m->count() > 0;
  run_cfg.exact_set = exact_flag->count() > 0;
  cert_cfg.has_t0 = cert_t->count() > 0;
  cert_cfg.has_m = cert_m->count() > 0;

  try {
    if (run->parsed()) return cmd_run(run_cfg);
    if (certify->parsed()) return cmd_certify(cert_cfg);
    if (figures->parsed()) return cmd_figures(fig_k, fig_seed, fig_out);
    if (suite->parsed()) return cmd_suite(suite_seed, suite_out, suite_criteria);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
