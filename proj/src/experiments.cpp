#include "themegrain/experiments.hpp"

#include "themegrain/config.hpp"
#include "themegrain/detail/parallel.hpp"
#include "themegrain/detail/rng.hpp"
#include "themegrain/version.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace themegrain {
namespace {

void validate_fitness_spec(const SchematicFitnessSpec& spec,
                           const SchemaPartitioning& beta) {
  if (spec.f_star.size() != beta.theme_space().size())
    throw validation_error("schematic fitness: f_star has " +
                           std::to_string(spec.f_star.size()) +
                           " entries, theme space holds " +
                           std::to_string(beta.theme_space().size()));
  if (!(spec.sigma_rel >= 0.0))
    throw validation_error("schematic fitness: sigma_rel must be nonnegative");
  if (!(spec.floor > 0.0))
    throw validation_error("schematic fitness: floor must be positive");
  for (Eigen::Index k = 0; k < spec.f_star.size(); ++k)
    if (!(spec.f_star(k) > spec.floor))
      throw validation_error("schematic fitness: f_star(" + std::to_string(k) +
                             ") = " + std::to_string(spec.f_star(k)) +
                             " is at or below the floor " +
                             std::to_string(spec.floor));
}

double noise_draw(const SchematicFitnessSpec& spec, Genome g) {
  switch (spec.noise) {
    case NoiseKind::truncated_normal: {
      // Box-Muller from two counter-hash streams, clipped at three sigma.
      const double u1 = detail::unit_open(detail::counter_hash(spec.seed, 0, g));
      const double u2 = detail::unit_open(detail::counter_hash(spec.seed, 1, g));
      const double z = std::sqrt(-2.0 * std::log(u1)) *
                       std::cos(2.0 * std::numbers::pi * u2);
      return std::clamp(z, -3.0, 3.0);
    }
    case NoiseKind::uniform_interval: {
      // Uniform on [-sqrt(3), sqrt(3)]: unit variance, like the normal.
      const double u = detail::unit_open(detail::counter_hash(spec.seed, 0, g));
      return (2.0 * u - 1.0) * std::numbers::sqrt3;
    }
  }
  throw validation_error("schematic fitness: unknown noise kind");
}

}  // namespace

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::truncated_normal: return "truncated_normal";
    case NoiseKind::uniform_interval: return "uniform_interval";
  }
  return "?";
}

double schematic_fitness_at(const SchematicFitnessSpec& spec,
                            const SchemaPartitioning& beta, Genome g) {
  validate_fitness_spec(spec, beta);
  if (static_cast<Eigen::Index>(g) >= beta.genome_space().size())
    throw validation_error("schematic fitness: genome outside the space");
  const double target = spec.f_star(beta.apply(g));
  if (spec.sigma_rel == 0.0) return target;
  const double value = target + spec.sigma_rel * target * noise_draw(spec, g);
  return std::max(spec.floor, value);
}

FitnessFunction gen_schematic_fitness(const SchematicFitnessSpec& spec,
                                      const SchemaPartitioning& beta) {
  validate_fitness_spec(spec, beta);
  const Eigen::Index n = beta.genome_space().size();
  Eigen::ArrayXd values(n);
  if (spec.sigma_rel == 0.0) {
    for (Eigen::Index g = 0; g < n; ++g)
      values(g) = spec.f_star(beta.apply(static_cast<Genome>(g)));
  } else {
    detail::parallel_chunks(0, n, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t g = lo; g < hi; ++g) {
        const Genome genome = static_cast<Genome>(g);
        const double target = spec.f_star(beta.apply(genome));
        values(g) = std::max(
            spec.floor, target + spec.sigma_rel * target * noise_draw(spec, genome));
      }
    });
  }
  return FitnessFunction::from_values(std::move(values));
}

Distribution gen_population(const PopulationSpec& spec,
                            const SchemaPartitioning& beta) {
  if (spec.theme_marginal.size() != beta.theme_space().size())
    throw validation_error("population: theme marginal has " +
                           std::to_string(spec.theme_marginal.size()) +
                           " entries, theme space holds " +
                           std::to_string(beta.theme_space().size()));
  if (spec.theme_marginal.is_zero())
    throw validation_error("population: theme marginal is the zero function");
  if (!(spec.eta >= 0.0 && spec.eta < 1.0))
    throw validation_error("population: eta " + std::to_string(spec.eta) +
                           " outside [0, 1)");
  const Eigen::Index n = beta.genome_space().size();
  const Eigen::Index themes = beta.theme_space().size();
  const std::uint64_t class_n = static_cast<std::uint64_t>(beta.class_size());
  const double flat = 1.0 / static_cast<double>(class_n);

  Eigen::ArrayXd w(n);
  if (spec.eta == 0.0) {
    for (Theme k = 0; k < static_cast<Theme>(themes); ++k) {
      const double share = spec.theme_marginal(k) * flat;
      for (std::uint64_t j = 0; j < class_n; ++j)
        w(beta.class_member(k, j)) = share;
    }
  } else {
    Eigen::ArrayXd noise(static_cast<Eigen::Index>(class_n));
    for (Theme k = 0; k < static_cast<Theme>(themes); ++k) {
      for (std::uint64_t j = 0; j < class_n; ++j)
        noise(static_cast<Eigen::Index>(j)) =
            detail::unit_open(detail::counter_hash(spec.seed, k, j));
      noise /= noise.sum();
      const double mass = spec.theme_marginal(k);
      for (std::uint64_t j = 0; j < class_n; ++j)
        w(beta.class_member(k, j)) =
            mass * ((1.0 - spec.eta) * flat +
                    spec.eta * noise(static_cast<Eigen::Index>(j)));
    }
  }
  return Distribution::from_weights(std::move(w));
}

ExperimentResult run_fidelity_experiment(const ExperimentConfig& config) {
  const SchemaPartitioning beta = build_partitioning(config);
  const Transmission transmission = build_transmission(config);
  const FitnessFunction fitness = build_fitness(config, beta);
  const FitnessFunction theme_fitness =
      build_theme_fitness(config, beta, fitness);
  const Distribution p0 = build_population(config, beta);

  const EvolutionMachine machine = EvolutionMachine::make(
      beta.genome_space(), transmission, fitness);

  CompareOptions options;
  options.path = parse_path(config.path);
  options.collect_timings = config.collect_timings;
  options.quotient.verify = true;
  options.quotient.mode = parse_ambivalence_mode(config.ambivalence.mode);
  options.quotient.samples = config.ambivalence.samples;
  options.quotient.tolerance = config.ambivalence.tolerance;

  ExperimentResult result{
      compare_trajectories(machine, beta, theme_fitness, p0,
                           config.generations, options),
      Provenance{kVersion, config_hash(config), config.seeds.fitness,
                 config.seeds.population, "compare"}};
  return result;
}

}  // namespace themegrain
