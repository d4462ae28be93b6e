#pragma once

#include "themegrain/core.hpp"
#include "themegrain/machine.hpp"
#include "themegrain/operators.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace themegrain {

enum class NoiseKind { truncated_normal, uniform_interval };

const char* to_string(NoiseKind kind);

/// Recipe for a fitness function whose values within each theme class are
/// independent low-variance draws centered on that class's target value.
struct SchematicFitnessSpec {
  /// Target class means, one per theme; strictly positive.
  Eigen::ArrayXd f_star;
  NoiseKind noise = NoiseKind::truncated_normal;
  /// Per-class standard deviation as a fraction of f_star(k).
  double sigma_rel = 0.0;
  /// Values are clamped up to this positivity floor.
  double floor = 1e-6;
  std::uint64_t seed = 0;
};

/// The draw for one genome, computable without materializing the table:
/// counter-based generation makes each genome's value a pure function of
/// (seed, genome). Truncated-normal draws clip at three sigma before the
/// floor clamp; sigma_rel = 0 returns the class target exactly.
double schematic_fitness_at(const SchematicFitnessSpec& spec,
                            const SchemaPartitioning& beta, Genome g);

/// Materializes the full table. Deterministic in the seed; rejects targets
/// at or below the floor.
FitnessFunction gen_schematic_fitness(const SchematicFitnessSpec& spec,
                                      const SchemaPartitioning& beta);

/// Recipe for an initial population with prescribed theme masses and
/// near-uniform within-class conditionals.
struct PopulationSpec {
  /// Mass assigned to each theme class; a proper distribution over themes.
  Distribution theme_marginal;
  /// Within-class deviation: each class conditional is
  /// (1-eta) * uniform + eta * (normalized random perturbation).
  double eta = 0.0;
  std::uint64_t seed = 0;
};

/// Builds the population; its projection equals the requested marginal to
/// within accumulation round-off, and eta = 0 gives exactly uniform
/// conditionals.
Distribution gen_population(const PopulationSpec& spec,
                            const SchemaPartitioning& beta);

struct Provenance {
  std::string version;
  std::string config_hash;  // 16 hex digits
  std::uint64_t seed_fitness = 0;
  std::uint64_t seed_population = 0;
  std::string command;
};

struct ExperimentResult {
  FidelityReport report;
  Provenance provenance;
};

struct ExperimentConfig;  // full definition in config.hpp

/// Assembles partitioning, transmission, fitness, theme fitness, and the
/// initial population from a validated config, verifies ambivalence, and
/// runs the lockstep comparison.
ExperimentResult run_fidelity_experiment(const ExperimentConfig& config);

}  // namespace themegrain
