#include "themegrain/operators.hpp"

#include <cmath>
#include <string>

namespace themegrain {
namespace {

void require_same_space(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b)
    throw validation_error(std::string(what) + ": size mismatch (" +
                           std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

FitnessFunction FitnessFunction::from_values(Eigen::ArrayXd values) {
  if (values.size() == 0)
    throw validation_error("fitness function over an empty space");
  if (!(values > 0.0).all())
    throw validation_error("fitness must be strictly positive everywhere; min is " +
                           std::to_string(values.minCoeff()));
  if (!values.isFinite().all())
    throw validation_error("fitness contains a non-finite value");
  return FitnessFunction(std::move(values));
}

double expectation(const FitnessFunction& f, const Distribution& p) {
  require_same_space(f.size(), p.size(), "expectation");
  return (f.values() * p.weights()).sum();
}

Distribution select(const FitnessFunction& f, const Distribution& p) {
  require_same_space(f.size(), p.size(), "select");
  const double mean = expectation(f, p);
  if (mean <= 0.0)
    throw validation_error("selection undefined: mean fitness is " +
                           std::to_string(mean));
  return Distribution::normalized(f.values() * p.weights() / mean);
}

Distribution project(const SchemaPartitioning& beta, const Distribution& p) {
  require_same_space(beta.genome_space().size(), p.size(), "project");
  Eigen::ArrayXd mass = Eigen::ArrayXd::Zero(beta.theme_space().size());
  for (Eigen::Index x = 0; x < p.size(); ++x)
    mass(beta.apply(static_cast<Genome>(x))) += p(x);
  if (p.is_zero()) return Distribution::zero(mass.size());
  return Distribution::normalized(std::move(mass));
}

Distribution theme_conditional(const SchemaPartitioning& beta,
                               const Distribution& p, Theme k) {
  require_same_space(beta.genome_space().size(), p.size(), "theme_conditional");
  if (static_cast<Eigen::Index>(k) >= beta.theme_space().size())
    throw validation_error("theme " + std::to_string(k) +
                           " outside theme space of order " +
                           std::to_string(beta.order()));
  const std::uint64_t n = static_cast<std::uint64_t>(beta.class_size());
  double mass = 0.0;
  for (std::uint64_t j = 0; j < n; ++j) mass += p(beta.class_member(k, j));
  if (mass == 0.0) return Distribution::zero(p.size());
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(p.size());
  for (std::uint64_t j = 0; j < n; ++j) {
    const Genome g = beta.class_member(k, j);
    w(g) = p(g) / mass;
  }
  return Distribution::normalized(std::move(w));
}

double theme_mean_fitness(const SchemaPartitioning& beta,
                          const FitnessFunction& f, const Distribution& p,
                          Theme k) {
  const Distribution cond = theme_conditional(beta, p, k);
  if (cond.is_zero()) return 0.0;
  return expectation(f, cond);
}

double thematic_mean_divergence(const FitnessFunction& f,
                                const FitnessFunction& f_star,
                                const SchemaPartitioning& beta,
                                const std::vector<Distribution>& populations) {
  if (populations.empty())
    throw validation_error("thematic_mean_divergence over an empty population set");
  require_same_space(f_star.size(), beta.theme_space().size(),
                     "thematic_mean_divergence: theme fitness");
  const std::uint64_t class_n = static_cast<std::uint64_t>(beta.class_size());
  double worst = 0.0;
  for (const Distribution& p : populations) {
    require_same_space(f.size(), p.size(), "thematic_mean_divergence: population");
    for (Eigen::Index k = 0; k < f_star.size(); ++k) {
      // Inline class mean to avoid materializing a conditional per theme.
      double mass = 0.0, weighted = 0.0;
      for (std::uint64_t j = 0; j < class_n; ++j) {
        const Genome g = beta.class_member(static_cast<Theme>(k), j);
        mass += p(g);
        weighted += p(g) * f(g);
      }
      if (mass == 0.0) continue;
      worst = std::max(worst, std::abs(weighted / mass - f_star(k)));
    }
  }
  return worst;
}

FitnessFunction derive_theme_fitness(const SchemaPartitioning& beta,
                                     const FitnessFunction& f,
                                     const Distribution& p) {
  require_same_space(f.size(), p.size(), "derive_theme_fitness");
  const Eigen::Index themes = beta.theme_space().size();
  const std::uint64_t class_n = static_cast<std::uint64_t>(beta.class_size());
  Eigen::ArrayXd values(themes);
  for (Eigen::Index k = 0; k < themes; ++k) {
    double mass = 0.0, weighted = 0.0;
    for (std::uint64_t j = 0; j < class_n; ++j) {
      const Genome g = beta.class_member(static_cast<Theme>(k), j);
      mass += p(g);
      weighted += p(g) * f(g);
    }
    if (mass == 0.0)
      throw validation_error("derive_theme_fitness: theme " + std::to_string(k) +
                             " carries no mass, its class mean is undefined");
    values(k) = weighted / mass;
  }
  return FitnessFunction::from_values(std::move(values));
}

}  // namespace themegrain
