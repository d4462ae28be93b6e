#include "themegrain/machine.hpp"

#include "themegrain/walsh.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace themegrain {

const char* to_string(VariationPath path) {
  switch (path) {
    case VariationPath::naive: return "naive";
    case VariationPath::fast: return "fast";
    case VariationPath::auto_select: return "auto";
  }
  return "?";
}

int transmission_arity(const Transmission& t) {
  return std::visit([](const auto& v) { return v.arity(); }, t);
}

Eigen::Index transmission_space_size(const Transmission& t) {
  if (const auto* spec = std::get_if<TransmissionSpec>(&t))
    return Eigen::Index{1} << spec->length();
  return std::get<TransmissionTable>(t).space_size();
}

EvolutionMachine EvolutionMachine::make(GenomeSpace space,
                                        Transmission transmission,
                                        FitnessFunction fitness) {
  if (transmission_space_size(transmission) != space.size())
    throw validation_error("evolution machine: transmission space " +
                           std::to_string(transmission_space_size(transmission)) +
                           " does not match genome space " +
                           std::to_string(space.size()));
  if (fitness.size() != space.size())
    throw validation_error("evolution machine: fitness has " +
                           std::to_string(fitness.size()) +
                           " values, genome space holds " +
                           std::to_string(space.size()));
  return EvolutionMachine{space, std::move(transmission), std::move(fitness)};
}

QuotientMachine QuotientMachine::make(ThemeSpace space,
                                      ThemeTransmission transmission,
                                      FitnessFunction fitness) {
  if (transmission.space_size() != space.size())
    throw validation_error("quotient machine: transmission space " +
                           std::to_string(transmission.space_size()) +
                           " does not match theme space " +
                           std::to_string(space.size()));
  if (fitness.size() != space.size())
    throw validation_error("quotient machine: fitness has " +
                           std::to_string(fitness.size()) +
                           " values, theme space holds " +
                           std::to_string(space.size()));
  return QuotientMachine{space, std::move(transmission), std::move(fitness)};
}

Distribution QuotientMachine::epoch(const Distribution& p) const {
  return vary_naive(transmission, select(fitness, p));
}

Distribution epoch(const EvolutionMachine& e, const Distribution& p,
                   VariationPath path) {
  const Distribution selected = select(e.fitness, p);
  if (const auto* table = std::get_if<TransmissionTable>(&e.transmission))
    return vary_naive(*table, selected);
  const auto& spec = std::get<TransmissionSpec>(e.transmission);
  switch (path) {
    case VariationPath::naive:
      return vary_naive(spec, selected);
    case VariationPath::fast:
      return vary_fast(spec, selected);
    case VariationPath::auto_select:
      return spec.length() <= 8 ? vary_naive(spec, selected)
                                : vary_fast(spec, selected);
  }
  throw validation_error("epoch: unknown variation path");
}

QuotientMachine build_quotient(const EvolutionMachine& e,
                               const SchemaPartitioning& beta,
                               FitnessFunction theme_fitness,
                               const QuotientOptions& options) {
  if (beta.genome_space() != e.space)
    throw validation_error("build_quotient: partitioning is over a different "
                           "genome space than the machine");
  if (options.verify) {
    const AmbivalenceReport report = std::visit(
        [&](const auto& t) {
          return check_ambivalence(t, beta, options.mode, options.samples,
                                   options.tolerance, options.seed);
        },
        e.transmission);
    if (!report.ambivalent) {
      std::string parents_a, parents_b;
      for (Genome g : report.witness_a)
        parents_a += (parents_a.empty() ? "" : ",") + std::to_string(g);
      for (Genome g : report.witness_b)
        parents_b += (parents_b.empty() ? "" : ",") + std::to_string(g);
      throw ambivalence_error(
          "transmission is not ambivalent under the partitioning: parent "
          "tuples (" + parents_a + ") and (" + parents_b +
          ") share themes but their class sums differ by " +
          std::to_string(report.max_deviation),
          report);
    }
  }
  ThemeTransmission quotient_t = std::visit(
      [&](const auto& t) { return theme_transmission(t, beta); },
      e.transmission);
  return QuotientMachine::make(beta.theme_space(), std::move(quotient_t),
                               std::move(theme_fitness));
}

std::vector<Distribution> run_trajectory(const EvolutionMachine& e,
                                         const Distribution& p0,
                                         int generations, VariationPath path) {
  if (generations < 0)
    throw validation_error("run_trajectory: negative generation count");
  std::vector<Distribution> states;
  states.reserve(static_cast<std::size_t>(generations) + 1);
  states.push_back(p0);
  for (int t = 0; t < generations; ++t)
    states.push_back(epoch(e, states.back(), path));
  return states;
}

double FidelityReport::max_error() const {
  double worst = 0.0;
  for (const FidelityRow& row : rows) worst = std::max(worst, row.error);
  return worst;
}

FidelityReport compare_trajectories(const EvolutionMachine& e,
                                    const SchemaPartitioning& beta,
                                    FitnessFunction theme_fitness,
                                    const Distribution& p0, int generations,
                                    const CompareOptions& options) {
  if (generations < 0)
    throw validation_error("compare_trajectories: negative generation count");
  if (p0.size() != e.space.size())
    throw validation_error("compare_trajectories: initial distribution size " +
                           std::to_string(p0.size()) +
                           " does not match genome space");
  const FitnessFunction f_star = theme_fitness;  // quotient keeps a copy
  const QuotientMachine quotient =
      build_quotient(e, beta, std::move(theme_fitness), options.quotient);

  FidelityReport report;
  report.rows.reserve(static_cast<std::size_t>(generations) + 1);

  Distribution fine = p0;
  Distribution coarse = project(beta, p0);

  FidelityRow first;
  first.generation = 0;
  first.error = 0.0;  // coarse state is the projection, by construction
  first.delta_hat = diagnostics::divergence_estimate(beta, e.fitness, f_star, fine);
  first.uniformity_dev = diagnostics::uniformity_deviation(beta, fine);
  first.uniformity_after_selection = std::numeric_limits<double>::quiet_NaN();
  first.projected = coarse.weights();
  first.quotient = coarse.weights();
  report.rows.push_back(std::move(first));

  for (int t = 1; t <= generations; ++t) {
    const auto t0 = std::chrono::steady_clock::now();
    const Distribution selected = select(e.fitness, fine);
    const double u_selected = diagnostics::uniformity_deviation(beta, selected);
    if (const auto* table = std::get_if<TransmissionTable>(&e.transmission)) {
      fine = vary_naive(*table, selected);
    } else {
      const auto& spec = std::get<TransmissionSpec>(e.transmission);
      const bool naive = options.path == VariationPath::naive ||
                         (options.path == VariationPath::auto_select &&
                          spec.length() <= 8);
      fine = naive ? vary_naive(spec, selected) : vary_fast(spec, selected);
    }
    coarse = quotient.epoch(coarse);
    const auto t1 = std::chrono::steady_clock::now();

    FidelityRow row;
    row.generation = t;
    const Distribution projected = project(beta, fine);
    row.error = manhattan_distance(projected, coarse);
    row.delta_hat = diagnostics::divergence_estimate(beta, e.fitness, f_star, fine);
    row.uniformity_dev = diagnostics::uniformity_deviation(beta, fine);
    row.uniformity_after_selection = u_selected;
    if (options.collect_timings)
      row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.projected = projected.weights();
    row.quotient = coarse.weights();
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace diagnostics {

double uniformity_deviation(const SchemaPartitioning& beta,
                            const Distribution& p) {
  if (beta.genome_space().size() != p.size())
    throw validation_error("uniformity_deviation: space mismatch");
  const Eigen::Index themes = beta.theme_space().size();
  const std::uint64_t class_n = static_cast<std::uint64_t>(beta.class_size());
  const double flat = 1.0 / static_cast<double>(class_n);
  double worst = 0.0;
  for (Theme k = 0; k < static_cast<Theme>(themes); ++k) {
    double mass = 0.0;
    for (std::uint64_t j = 0; j < class_n; ++j)
      mass += p(beta.class_member(k, j));
    if (mass < kMassFloor) continue;
    double dist = 0.0;
    for (std::uint64_t j = 0; j < class_n; ++j)
      dist += std::abs(p(beta.class_member(k, j)) / mass - flat);
    worst = std::max(worst, dist);
  }
  return worst;
}

double divergence_estimate(const SchemaPartitioning& beta,
                           const FitnessFunction& f,
                           const FitnessFunction& theme_fitness,
                           const Distribution& p) {
  if (beta.genome_space().size() != p.size() || f.size() != p.size())
    throw validation_error("divergence_estimate: space mismatch");
  if (theme_fitness.size() != beta.theme_space().size())
    throw validation_error("divergence_estimate: theme fitness size mismatch");
  const std::uint64_t class_n = static_cast<std::uint64_t>(beta.class_size());
  double worst = 0.0;
  for (Theme k = 0; k < static_cast<Theme>(theme_fitness.size()); ++k) {
    double mass = 0.0, weighted = 0.0;
    for (std::uint64_t j = 0; j < class_n; ++j) {
      const Genome g = beta.class_member(k, j);
      mass += p(g);
      weighted += p(g) * f(g);
    }
    if (mass < kMassFloor) continue;
    worst = std::max(worst, std::abs(weighted / mass - theme_fitness(k)));
  }
  return worst;
}

std::optional<double> class_bit_marginal(const SchemaPartitioning& beta,
                                         const Distribution& p, Theme k,
                                         int locus) {
  if (beta.genome_space().size() != p.size())
    throw validation_error("class_bit_marginal: space mismatch");
  if (locus < 0 || locus >= beta.genome_space().length())
    throw validation_error("class_bit_marginal: locus " + std::to_string(locus) +
                           " outside the genome length");
  for (int defined : beta.defined_loci())
    if (defined == locus)
      throw validation_error("class_bit_marginal: locus " +
                             std::to_string(locus) +
                             " is a defined locus; its bit is fixed by the theme");
  const std::uint64_t class_n = static_cast<std::uint64_t>(beta.class_size());
  double mass = 0.0, set_mass = 0.0;
  for (std::uint64_t j = 0; j < class_n; ++j) {
    const Genome g = beta.class_member(k, j);
    mass += p(g);
    if ((g >> locus) & 1u) set_mass += p(g);
  }
  if (mass < kMassFloor) return std::nullopt;
  return set_mass / mass;
}

}  // namespace diagnostics

}  // namespace themegrain
