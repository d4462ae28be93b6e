#pragma once

#include "themegrain/core.hpp"
#include "themegrain/experiments.hpp"
#include "themegrain/machine.hpp"
#include "themegrain/operators.hpp"
#include "themegrain/transmission.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace themegrain {

struct TransmissionConfig {
  std::string kind = "uniform";  // uniform | one_point | none | table
  double mutation_rate = 0.0;
  /// kind == "table" carries exactly one of these: a mask distribution
  /// (crossover by explicit mask law, composes with mutation_rate) or a raw
  /// conditional table (complete transmission; mutation_rate must be 0).
  std::optional<Eigen::ArrayXd> mask_table;
  std::optional<Eigen::ArrayXd> transmission_table;
};

struct FitnessConfig {
  std::string mode = "schematic";  // table | schematic
  std::optional<Eigen::ArrayXd> table;   // mode table: 2^length values
  std::optional<Eigen::ArrayXd> f_star;  // mode schematic: per-theme targets
  std::string noise = "truncated_normal";
  double sigma_rel = 0.0;
  double floor = 1e-6;
};

struct PopulationConfig {
  std::string mode = "uniform";  // uniform | product | table | schematic
  std::optional<Eigen::ArrayXd> bit_one_probs;  // mode product
  std::optional<Eigen::ArrayXd> table;          // mode table
  /// Mode schematic: per-theme masses; absent means uniform over themes.
  std::optional<Eigen::ArrayXd> theme_marginal;
  double eta = 0.0;
};

struct SeedsConfig {
  std::uint64_t fitness = 0;
  std::uint64_t population = 0;
};

struct OutputsConfig {
  std::optional<std::string> trajectory_csv;
  std::string report_csv = "report.csv";
  std::string bench_csv = "bench.csv";
  std::string divergence_csv = "divergence.csv";
};

struct BenchConfig {
  int l_min = 2;
  int l_max = 8;
  int repetitions = 3;
};

struct AmbivalenceConfig {
  std::string mode = "exhaustive";  // exhaustive | sampled
  std::uint64_t samples = 2000;
  double tolerance = kAmbivalenceTolerance;
};

struct ExperimentConfig {
  int schema_version = 1;
  int genome_length = 0;
  std::vector<int> defined_loci;
  TransmissionConfig transmission;
  std::optional<FitnessConfig> fitness;
  std::optional<PopulationConfig> population;
  int generations = 0;
  std::string path = "auto";  // naive | fast | auto
  SeedsConfig seeds;
  OutputsConfig outputs;
  BenchConfig bench;
  AmbivalenceConfig ambivalence;

  /// Canonical serialization of the loaded document; hashed for provenance.
  std::string canonical_json;
  /// Runtime-only (CLI --timings): record per-generation wall times in the
  /// report. Not part of the document or its hash.
  bool collect_timings = false;
};

/// Parses and validates a config document. Unknown keys, missing required
/// fields, and cross-field inconsistencies all raise validation_error with
/// a message naming the offender.
ExperimentConfig load_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// FNV-1a (64-bit) over the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

VariationPath parse_path(const std::string& name);
AmbivalenceMode parse_ambivalence_mode(const std::string& name);
NoiseKind parse_noise(const std::string& name);

SchemaPartitioning build_partitioning(const ExperimentConfig& config);
Transmission build_transmission(const ExperimentConfig& config);
FitnessFunction build_fitness(const ExperimentConfig& config,
                              const SchemaPartitioning& beta);
/// Theme-level fitness for the quotient: schematic mode exposes its target
/// table directly; table mode falls back to exact unweighted class means.
FitnessFunction build_theme_fitness(const ExperimentConfig& config,
                                    const SchemaPartitioning& beta,
                                    const FitnessFunction& fitness);
Distribution build_population(const ExperimentConfig& config,
                              const SchemaPartitioning& beta);

}  // namespace themegrain
