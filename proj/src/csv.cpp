#include "themegrain/csv.hpp"

#include <cstdio>
#include <ostream>

namespace themegrain {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_provenance(std::ostream& out, const Provenance& provenance) {
  out << "# themegrain " << provenance.version << '\n'
      << "# command " << provenance.command << '\n'
      << "# config_hash " << provenance.config_hash << '\n'
      << "# seed_fitness " << provenance.seed_fitness << '\n'
      << "# seed_population " << provenance.seed_population << '\n';
}

void write_fidelity_csv(std::ostream& out, const FidelityReport& report,
                        const Provenance& provenance) {
  write_provenance(out, provenance);
  out << "t,error,delta_hat,uniformity_dev,wall_ms\n";
  for (const FidelityRow& row : report.rows)
    out << row.generation << ',' << format_double(row.error) << ','
        << format_double(row.delta_hat) << ','
        << format_double(row.uniformity_dev) << ','
        << format_double(row.wall_ms) << '\n';
}

void write_trajectory_csv(std::ostream& out, const FidelityReport& report,
                          const Provenance& provenance) {
  write_provenance(out, provenance);
  if (report.rows.empty()) return;
  const Eigen::Index k_count = report.rows.front().projected.size();
  out << 't';
  for (Eigen::Index k = 0; k < k_count; ++k) out << ",proj_" << k;
  for (Eigen::Index k = 0; k < k_count; ++k) out << ",quot_" << k;
  out << '\n';
  for (const FidelityRow& row : report.rows) {
    out << row.generation;
    for (Eigen::Index k = 0; k < k_count; ++k)
      out << ',' << format_double(row.projected(k));
    for (Eigen::Index k = 0; k < k_count; ++k)
      out << ',' << format_double(row.quotient(k));
    out << '\n';
  }
}

void write_bench_csv(std::ostream& out, const std::vector<MixingBenchRow>& rows,
                     const Provenance& provenance) {
  write_provenance(out, provenance);
  out << "l,kind,mu,path,mean_seconds,stddev_seconds\n";
  for (const MixingBenchRow& row : rows)
    out << row.length << ',' << to_string(row.kind) << ','
        << format_double(row.mutation_rate) << ',' << row.path << ','
        << format_double(row.mean_seconds) << ','
        << format_double(row.stddev_seconds) << '\n';
}

void write_divergence_csv(std::ostream& out,
                          const std::vector<DivergenceRow>& rows,
                          const Provenance& provenance) {
  write_provenance(out, provenance);
  out << "theme,class_mean,f_star,abs_deviation\n";
  for (const DivergenceRow& row : rows)
    out << row.theme << ',' << format_double(row.class_mean) << ','
        << format_double(row.f_star) << ','
        << format_double(row.abs_deviation) << '\n';
}

}  // namespace themegrain
