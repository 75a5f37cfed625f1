#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "selpred/engine.hpp"

namespace selpred {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_meta(const std::map<std::string, std::string>& meta, std::ostream& out) {
  for (const auto& [key, value] : meta) out << "# " << key << "=" << value << "\n";
}

const char* kColumns =
    "experiment,k,n,trial,k_prime,t,m,predicted,actual,loss,probability,weighted_loss\n";

std::string meta_or_empty(const std::map<std::string, std::string>& meta,
                          const std::string& key) {
  const auto it = meta.find(key);
  return it == meta.end() ? std::string{} : it->second;
}

}  // namespace

void write_report_csv(const TrialReport& report,
                      const std::map<std::string, std::string>& meta, std::ostream& out) {
  write_meta(meta, out);
  out << kColumns;
  const std::string k = meta_or_empty(meta, "k");
  const std::string n = meta_or_empty(meta, "n");
  for (const PlayRecord& r : report.records) {
    out << report.experiment << ',' << k << ',' << n << ',' << r.trial << ','
        << r.k_prime << ',' << r.t << ',' << r.m << ',' << fmt(r.predicted) << ','
        << fmt(r.actual) << ',' << fmt(r.loss) << ",,\n";
  }
  out << "# trials=" << report.trials << " mean=" << fmt(report.mean)
      << " ci_half_width=" << fmt(report.ci_half_width) << "\n";
}

void write_exact_csv(const std::string& experiment, const std::vector<SupportRow>& rows,
                     const std::map<std::string, std::string>& meta, std::ostream& out) {
  write_meta(meta, out);
  out << kColumns;
  const std::string k = meta_or_empty(meta, "k");
  const std::string n = meta_or_empty(meta, "n");
  double total = 0.0;
  for (const SupportRow& r : rows) {
    const double weighted = r.probability * r.loss;
    total += weighted;
    out << experiment << ',' << k << ',' << n << ",-1," << r.k_prime << ',' << r.t << ','
        << r.m << ',' << fmt(r.predicted) << ',' << fmt(r.actual) << ',' << fmt(r.loss)
        << ',' << fmt(r.probability) << ',' << fmt(weighted) << "\n";
  }
  out << "# exact_expected_loss=" << fmt(total) << "\n";
}

void write_variance_csv(const VarianceScan& scan,
                        const std::map<std::string, std::string>& meta, std::ostream& out) {
  write_meta(meta, out);
  out << "t,m,prefix_id,variance\n";
  for (const VarianceRow& row : scan.rows) {
    out << row.t << ',' << row.m << ',' << row.prefix_id << ',' << fmt(row.variance)
        << "\n";
  }
  const VarianceCertificate& c = scan.certificate;
  out << "# min_variance=" << fmt(c.min_variance) << " at t=" << c.argmin_t
      << " m=" << c.argmin_m << " prefix_id=" << c.argmin_prefix << "\n";
}

std::string figure_csv(std::size_t k, std::uint64_t seed) {
  if (k < 16) throw std::invalid_argument("figure data requires k >= 16");
  Rng rng(seed);
  const Sequence leaves = anti_concentrated_source(k).sample(rng);

  std::ostringstream out;
  out << "# source=anti-concentrated k=" << k << " seed=" << seed << "\n";
  out << "scale,block_index,block_mean\n";
  for (std::size_t scale : {std::size_t{1} << 10, std::size_t{1} << 15}) {
    const auto means = block_means(leaves.real_values(), scale, 30);
    for (std::size_t b = 0; b < means.size(); ++b)
      out << scale << ',' << b << ',' << fmt(means[b]) << "\n";
  }
  return out.str();
}

}  // namespace selpred
