#include "themegrain/operators.hpp"

#include "doctest.h"
#include "oracle.hpp"
#include "themegrain/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace themegrain;

namespace {

Distribution make_dist(std::initializer_list<double> weights) {
  Eigen::ArrayXd w(static_cast<Eigen::Index>(weights.size()));
  Eigen::Index i = 0;
  for (double v : weights) w(i++) = v;
  return Distribution::from_weights(std::move(w));
}

FitnessFunction make_fitness(std::initializer_list<double> values) {
  Eigen::ArrayXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return FitnessFunction::from_values(std::move(v));
}

}  // namespace

TEST_CASE("fitness function rejects non-positive and non-finite values") {
  CHECK_NOTHROW(make_fitness({0.1, 2.0}));
  CHECK_THROWS_AS(make_fitness({1.0, 0.0}), validation_error);
  CHECK_THROWS_AS(make_fitness({1.0, -2.0}), validation_error);
  Eigen::ArrayXd inf(2);
  inf << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(FitnessFunction::from_values(inf), validation_error);
}

TEST_CASE("expectation values") {
  const auto f = make_fitness({1.0, 3.0});
  CHECK(expectation(f, make_dist({0.5, 0.5})) == doctest::Approx(2.0));
  // Constant fitness: expectation is the constant, whatever p is.
  const auto c = make_fitness({2.5, 2.5, 2.5, 2.5});
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial)
    CHECK(expectation(c, oracle::random_distribution(rng, 4)) ==
          doctest::Approx(2.5).epsilon(1e-14));
  // The zero function has expectation 0 under any fitness.
  CHECK(expectation(f, Distribution::zero(2)) == 0.0);
  CHECK_THROWS_AS(expectation(f, Distribution::uniform(4)), validation_error);
}

TEST_CASE("selection values and simplex preservation") {
  const auto sel = select(make_fitness({1.0, 3.0}), make_dist({0.5, 0.5}));
  CHECK(sel(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sel(1) == doctest::Approx(0.75).epsilon(1e-15));

  // Constant fitness is selection-neutral.
  std::mt19937_64 rng(22);
  const auto p = oracle::random_distribution(rng, 8);
  const auto neutral = select(FitnessFunction::from_values(
                                  Eigen::ArrayXd::Constant(8, 1.7)),
                              p);
  CHECK(manhattan_distance(neutral, p) <= 1e-14);

  // Point masses are fixed points of selection under any fitness.
  const auto point = Distribution::point_mass(8, 5);
  const auto f8 = FitnessFunction::from_values(
      oracle::random_fitness_values(rng, 8));
  CHECK(manhattan_distance(select(f8, point), point) == 0.0);

  // Random instances stay on the simplex.
  for (int trial = 0; trial < 40; ++trial) {
    const int length = 1 + static_cast<int>(rng() % 12);
    const Eigen::Index n = Eigen::Index{1} << length;
    const auto q = oracle::random_distribution(rng, n, 0.0001);
    const auto f = FitnessFunction::from_values(
        oracle::random_fitness_values(rng, n));
    const auto out = select(f, q);
    CHECK((out.weights() >= 0.0).all());
    CHECK(std::abs(out.weights().sum() - 1.0) <= 1e-12);
  }

  CHECK_THROWS_AS(select(make_fitness({1.0, 2.0}), Distribution::zero(2)),
                  validation_error);
}

TEST_CASE("projection values") {
  // Uniform over three bits, one defined locus: an even split.
  const auto beta3 = make_schema_partitioning(3, {0});
  const auto proj = project(beta3, Distribution::uniform(8));
  CHECK(proj(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(proj(1) == doctest::Approx(0.5).epsilon(1e-15));

  // Point mass projects to the point mass of its theme.
  const auto beta4 = make_schema_partitioning(4, {1, 3});
  const auto pm = project(beta4, Distribution::point_mass(16, 0b1010));
  CHECK(pm(beta4.apply(0b1010)) == 1.0);
  CHECK(pm.weights().sum() == doctest::Approx(1.0));

  const auto beta2 = make_schema_partitioning(2, {1});
  const auto small = project(beta2, make_dist({0.1, 0.2, 0.3, 0.4}));
  CHECK(small(0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(small(1) == doctest::Approx(0.7).epsilon(1e-15));

  // Random agreement with the brute-force reference.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const int length = 2 + static_cast<int>(rng() % 7);
    const int order =
        1 + static_cast<int>(rng() % static_cast<unsigned>(length));
    const auto loci = oracle::random_loci(rng, length, order);
    const auto beta = make_schema_partitioning(length, loci);
    const auto p = oracle::random_distribution(rng, Eigen::Index{1} << length);
    const auto got = project(beta, p);
    const auto want = oracle::ref_project(length, loci, p.weights());
    CHECK(manhattan_distance(got.weights(), want) <= 1e-13);
  }

  // The zero function projects to the zero function.
  CHECK(project(beta2, Distribution::zero(4)).is_zero());
}

TEST_CASE("theme conditional values and mass decomposition") {
  const auto beta = make_schema_partitioning(2, {0});
  const auto p = make_dist({0.1, 0.2, 0.3, 0.4});
  const auto cond = theme_conditional(beta, p, 1);
  CHECK(cond(0) == 0.0);
  CHECK(cond(1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(cond(2) == 0.0);
  CHECK(cond(3) == doctest::Approx(2.0 / 3).epsilon(1e-15));

  // No mass in the class: the flagged zero function comes back.
  const auto spike = Distribution::point_mass(4, 0);
  CHECK(theme_conditional(beta, spike, 1).is_zero());

  // Uniform input: conditional is uniform on the class.
  const auto u = theme_conditional(beta, Distribution::uniform(4), 0);
  CHECK(u(0) == doctest::Approx(0.5));
  CHECK(u(2) == doctest::Approx(0.5));
  CHECK(u(1) == 0.0);

  CHECK_THROWS_AS(theme_conditional(beta, p, 2), validation_error);

  // p restricted to each class equals class mass times the conditional.
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const int length = 2 + static_cast<int>(rng() % 6);
    const int order =
        1 + static_cast<int>(rng() % static_cast<unsigned>(length));
    const auto loci = oracle::random_loci(rng, length, order);
    const auto part = make_schema_partitioning(length, loci);
    const auto q = oracle::random_distribution(rng, Eigen::Index{1} << length);
    const auto masses = project(part, q);
    for (Theme k = 0; k < static_cast<Theme>(masses.size()); ++k) {
      const auto ck = theme_conditional(part, q, k);
      for (Genome g : part.theme_class(k))
        CHECK(std::abs(q(g) - masses(k) * ck(g)) <= 1e-12);
    }
  }
}

TEST_CASE("theme mean fitness values") {
  const auto beta = make_schema_partitioning(2, {0});
  const auto f = make_fitness({1.0, 2.0, 3.0, 4.0});
  const auto u = Distribution::uniform(4);
  CHECK(theme_mean_fitness(beta, f, u, 0) == doctest::Approx(2.0));
  CHECK(theme_mean_fitness(beta, f, u, 1) == doctest::Approx(3.0));
  // Constant fitness: class means are the constant wherever mass exists.
  const auto c = make_fitness({1.5, 1.5, 1.5, 1.5});
  CHECK(theme_mean_fitness(beta, c, u, 1) == doctest::Approx(1.5));
  // Zero class mass: defined as 0.
  CHECK(theme_mean_fitness(beta, f, Distribution::point_mass(4, 0), 1) == 0.0);
}

TEST_CASE("thematic mean divergence values") {
  const auto beta = make_schema_partitioning(2, {0});
  const auto f = make_fitness({1.0, 2.0, 3.0, 4.0});
  const std::vector<Distribution> pops{Distribution::uniform(4)};
  CHECK(thematic_mean_divergence(f, make_fitness({2.0, 3.0}), beta, pops) ==
        doctest::Approx(0.0));
  CHECK(thematic_mean_divergence(f, make_fitness({2.0, 3.5}), beta, pops) ==
        doctest::Approx(0.5));

  // A fitness that only depends on the theme has divergence 0 against its
  // own theme table, for any mix of populations.
  std::mt19937_64 rng(25);
  const auto part = make_schema_partitioning(5, {0, 3});
  Eigen::ArrayXd themed(32);
  for (Genome g = 0; g < 32; ++g)
    themed(g) = 1.0 + static_cast<double>(part.apply(g));
  const auto tf = FitnessFunction::from_values(themed);
  const auto f_star = make_fitness({1.0, 2.0, 3.0, 4.0});
  std::vector<Distribution> many;
  for (int i = 0; i < 6; ++i)
    many.push_back(oracle::random_distribution(rng, 32));
  CHECK(thematic_mean_divergence(tf, f_star, part, many) <= 1e-12);

  // Zero-mass (population, theme) pairs are skipped, not counted as |0-f*|.
  const std::vector<Distribution> spiked{Distribution::point_mass(4, 0)};
  CHECK(thematic_mean_divergence(f, make_fitness({1.0, 100.0}), beta, spiked) ==
        doctest::Approx(0.0));

  CHECK_THROWS_AS(thematic_mean_divergence(f, make_fitness({2.0, 3.0}), beta,
                                           {}),
                  validation_error);
}

TEST_CASE("derived theme fitness is the vector of class means") {
  const auto beta = make_schema_partitioning(2, {0});
  const auto f = make_fitness({1.0, 2.0, 3.0, 4.0});
  const auto derived = derive_theme_fitness(beta, f, Distribution::uniform(4));
  CHECK(derived(0) == doctest::Approx(2.0));
  CHECK(derived(1) == doctest::Approx(3.0));
  CHECK_THROWS_AS(derive_theme_fitness(beta, f, Distribution::point_mass(4, 2)),
                  validation_error);
}

TEST_CASE("projection commutes with selection through class mean fitness") {
  // Projecting the selected population equals selecting the projected
  // population under the theme fitness given by current class means. This
  // equality has no preconditions beyond mass, so it must hold to near
  // machine precision on arbitrary instances.
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 100; ++trial) {
    const int length = 2 + static_cast<int>(rng() % 9);  // up to 10
    const int order =
        1 + static_cast<int>(rng() % static_cast<unsigned>(length));
    const auto loci = oracle::random_loci(rng, length, order);
    const auto beta = make_schema_partitioning(length, loci);
    const Eigen::Index n = Eigen::Index{1} << length;
    const auto p = oracle::random_distribution(rng, n, 0.001);
    const auto f = FitnessFunction::from_values(
        oracle::random_fitness_values(rng, n));

    const auto lhs = project(beta, select(f, p));
    const auto rhs = select(derive_theme_fitness(beta, f, p), project(beta, p));
    CHECK(manhattan_distance(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("selection respects theme-invariant fitness at the theme level") {
  // When every genome's fitness equals its theme's target value, selection
  // and projection commute against that fixed theme fitness.
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 30; ++trial) {
    const int length = 2 + static_cast<int>(rng() % 7);
    const int order =
        1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(length, 3)));
    const auto loci = oracle::random_loci(rng, length, order);
    const auto beta = make_schema_partitioning(length, loci);
    const auto f_star = FitnessFunction::from_values(
        oracle::random_fitness_values(rng, Eigen::Index{1} << order));
    Eigen::ArrayXd lifted(Eigen::Index{1} << length);
    for (Genome g = 0; g < (Genome{1} << length); ++g)
      lifted(g) = f_star(beta.apply(g));
    const auto f = FitnessFunction::from_values(lifted);
    const auto p =
        oracle::random_distribution(rng, Eigen::Index{1} << length, 0.001);

    const auto lhs = project(beta, select(f, p));
    const auto rhs = select(f_star, project(beta, p));
    CHECK(manhattan_distance(lhs, rhs) <= 1e-10);
  }
}

TEST_CASE("selection is continuous in the fitness function") {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 8;
    const auto p = oracle::random_distribution(rng, n);
    const auto base = oracle::random_fitness_values(rng, n);  // in [0.5, 4]
    Eigen::ArrayXd noise(n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) noise(i) = u(rng);

    const auto reference = select(FitnessFunction::from_values(base), p);
    double previous = -1.0;
    for (double eta : {1e-2, 1e-3, 1e-4}) {
      const auto perturbed =
          select(FitnessFunction::from_values(base + eta * noise), p);
      const double dist = manhattan_distance(perturbed, reference);
      if (previous >= 0.0) CHECK(dist <= previous * 1.1);
      previous = dist;
    }
  }
}

TEST_CASE("selection is continuous in the population") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 8;
    const auto f = FitnessFunction::from_values(
        oracle::random_fitness_values(rng, n));
    const auto base = oracle::random_distribution(rng, n);
    const auto other = oracle::random_distribution(rng, n);

    const auto reference = select(f, base);
    double previous = -1.0;
    for (double eta : {1e-2, 1e-3, 1e-4}) {
      const auto mixed = Distribution::normalized(
          (1.0 - eta) * base.weights() + eta * other.weights());
      const double dist = manhattan_distance(select(f, mixed), reference);
      if (previous >= 0.0) CHECK(dist <= previous * 1.1);
      previous = dist;
    }
  }
}
