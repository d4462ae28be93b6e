#pragma once

#include "themegrain/core.hpp"

#include <Eigen/Core>

#include <vector>

namespace themegrain {

/// A strictly positive fitness function on a finite space, stored densely.
class FitnessFunction {
 public:
  static FitnessFunction from_values(Eigen::ArrayXd values);

  Eigen::Index size() const { return v_.size(); }
  double operator()(Eigen::Index i) const { return v_(i); }
  const Eigen::ArrayXd& values() const { return v_; }

 private:
  explicit FitnessFunction(Eigen::ArrayXd v) : v_(std::move(v)) {}

  Eigen::ArrayXd v_;
};

/// Mean of f under p: sum_x f(x) p(x).
double expectation(const FitnessFunction& f, const Distribution& p);

/// Fitness-proportional selection: (S_f p)(x) = f(x) p(x) / E_f(p).
/// Undefined (throws) when p is the zero function, since E_f(p) = 0.
Distribution select(const FitnessFunction& f, const Distribution& p);

/// Pushforward of p along the partitioning: mass of each theme class.
Distribution project(const SchemaPartitioning& beta, const Distribution& p);

/// Conditional of p on the class of theme k, as a distribution over the
/// genome space. When the class carries no mass the conditional is
/// undefined; the all-zero function is returned in its place.
Distribution theme_conditional(const SchemaPartitioning& beta,
                               const Distribution& p, Theme k);

/// Mean fitness of the conditional of p on theme k's class. Requires the
/// class to carry mass.
double theme_mean_fitness(const SchemaPartitioning& beta,
                          const FitnessFunction& f, const Distribution& p,
                          Theme k);

/// Worst-case disagreement between within-class mean fitness and the theme
/// fitness f*: max over supplied populations p and themes k of
/// |theme_mean_fitness(f, beta, p, k) - f*(k)|. (p, k) pairs whose class
/// carries no mass are skipped — their conditional is undefined, and
/// counting them as |0 - f*(k)| would poison the estimate.
double thematic_mean_divergence(const FitnessFunction& f,
                                const FitnessFunction& f_star,
                                const SchemaPartitioning& beta,
                                const std::vector<Distribution>& populations);

/// Theme-level fitness induced by f and p: theme k maps to the mean fitness
/// of p's conditional on k's class. Every class must carry mass.
FitnessFunction derive_theme_fitness(const SchemaPartitioning& beta,
                                     const FitnessFunction& f,
                                     const Distribution& p);

}  // namespace themegrain
