#pragma once

#include "themegrain/experiments.hpp"
#include "themegrain/machine.hpp"
#include "themegrain/walsh.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace themegrain {

/// Shortest round-trippable decimal form of a double (17 significant
/// digits), so serialized values are byte-stable and lossless.
std::string format_double(double v);

/// Every CSV starts with the same `#`-prefixed provenance block: artifact
/// version, config hash, seeds, and the command that produced the file.
/// Nothing volatile (no timestamps) — identical inputs yield identical
/// bytes.
void write_provenance(std::ostream& out, const Provenance& provenance);

/// Columns: t,error,delta_hat,uniformity_dev,wall_ms.
void write_fidelity_csv(std::ostream& out, const FidelityReport& report,
                        const Provenance& provenance);

/// Columns: t, proj_0..proj_{K-1}, quot_0..quot_{K-1} — the projected fine
/// state and the quotient state per generation.
void write_trajectory_csv(std::ostream& out, const FidelityReport& report,
                          const Provenance& provenance);

/// Columns: l,kind,mu,path,mean_seconds,stddev_seconds.
void write_bench_csv(std::ostream& out, const std::vector<MixingBenchRow>& rows,
                     const Provenance& provenance);

struct DivergenceRow {
  Theme theme = 0;
  double class_mean = 0.0;
  double f_star = 0.0;
  double abs_deviation = 0.0;
};

/// Columns: theme,class_mean,f_star,abs_deviation.
void write_divergence_csv(std::ostream& out,
                          const std::vector<DivergenceRow>& rows,
                          const Provenance& provenance);

}  // namespace themegrain
