#include "themegrain/core.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace themegrain;

TEST_CASE("genome space sizes and bounds") {
  const GenomeSpace space(4);
  CHECK(space.length() == 4);
  CHECK(space.size() == 16);
  CHECK_THROWS_AS(GenomeSpace(0), validation_error);
  CHECK_THROWS_AS(GenomeSpace(-2), validation_error);
  CHECK_THROWS_AS(GenomeSpace(GenomeSpace::kMaxLength + 1), validation_error);
  CHECK_NOTHROW(GenomeSpace(GenomeSpace::kMaxLength));
}

TEST_CASE("partitioning validation names the offending locus") {
  CHECK_THROWS_AS(make_schema_partitioning(4, {0, 4}), validation_error);
  CHECK_THROWS_AS(make_schema_partitioning(4, {-1}), validation_error);
  CHECK_THROWS_AS(make_schema_partitioning(4, {}), validation_error);
  try {
    make_schema_partitioning(4, {1, 1});
    FAIL("expected a throw");
  } catch (const validation_error& err) {
    const std::string msg = err.what();
    CHECK(msg.find("duplicate defined locus 1") != std::string::npos);
  }
  try {
    make_schema_partitioning(3, {0, 7});
    FAIL("expected a throw");
  } catch (const validation_error& err) {
    const std::string msg = err.what();
    CHECK(msg.find('7') != std::string::npos);
  }
}

TEST_CASE("theme extraction packs defined-locus bits in locus order") {
  // Convention: theme bit j mirrors the genome bit at loci[j]. With loci
  // {0, 2}, a genome with bit0 = 0 and bit2 = 1 maps to theme 0b10.
  const auto beta = make_schema_partitioning(4, {0, 2});
  CHECK(beta.apply(0b0110) == 0b10);
  CHECK(beta.apply(0b0100) == 0b10);
  CHECK(beta.apply(0b1010) == 0b00);
  CHECK(beta.apply(0b0101) == 0b11);
  CHECK(beta.apply(0b0001) == 0b01);
  // Caller-given locus order decides theme bit positions, sorted or not.
  const auto swapped = make_schema_partitioning(4, {2, 0});
  CHECK(swapped.apply(0b0100) == 0b01);
  CHECK(swapped.apply(0b0001) == 0b10);
}

TEST_CASE("identity partitioning maps every genome to itself") {
  const auto id = make_schema_partitioning(3, {0, 1, 2});
  CHECK(id.is_identity());
  for (Genome g = 0; g < 8; ++g) CHECK(id.apply(g) == g);
  CHECK(identity_partitioning(4).is_identity());
  // Full order means singleton classes, even if the loci permute bits: the
  // projection loses nothing, which is what the flag reports.
  CHECK(make_schema_partitioning(3, {2, 1, 0}).is_identity());
  CHECK(make_schema_partitioning(3, {0, 1}).is_identity() == false);
}

TEST_CASE("theme extraction agrees with bit-level reference") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int length = 2 + static_cast<int>(rng() % 7);
    const int order =
        1 + static_cast<int>(rng() % static_cast<unsigned>(length));
    const auto loci = oracle::random_loci(rng, length, order);
    const SchemaPartitioning beta = make_schema_partitioning(length, loci);
    for (Genome g = 0; g < (Genome{1} << length); ++g)
      CHECK(beta.apply(g) == oracle::ref_theme_of(loci, g));
  }
}

TEST_CASE("theme classes partition the genome space") {
  // Spot value first: length 4, one defined locus, eight members per class.
  CHECK(make_schema_partitioning(4, {1}).class_size() == 8);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const int length = 2 + static_cast<int>(rng() % 6);
    const int order =
        1 + static_cast<int>(rng() % static_cast<unsigned>(length));
    const auto loci = oracle::random_loci(rng, length, order);
    const SchemaPartitioning beta = make_schema_partitioning(length, loci);
    std::set<Genome> seen;
    for (Theme k = 0; k < (Theme{1} << order); ++k) {
      const auto members = beta.theme_class(k);
      CHECK(members.size() ==
            (std::size_t{1} << (length - order)));
      CHECK(std::is_sorted(members.begin(), members.end()));
      CHECK(members == oracle::ref_theme_class(length, loci, k));
      for (Genome g : members) {
        CHECK(beta.apply(g) == k);
        CHECK(seen.insert(g).second);  // classes must not overlap
      }
    }
    CHECK(seen.size() == (std::size_t{1} << length));  // and must cover
  }
}

TEST_CASE("theme class frozen values") {
  const auto members = make_schema_partitioning(2, {0}).theme_class(1);
  CHECK(members == std::vector<Genome>{0b01, 0b11});
  const auto zeros = make_schema_partitioning(3, {2}).theme_class(0);
  CHECK(zeros == std::vector<Genome>{0, 1, 2, 3});
  // Identity partitioning: each class is the singleton of its theme.
  const auto id = identity_partitioning(3);
  for (Theme k = 0; k < 8; ++k)
    CHECK(id.theme_class(k) == std::vector<Genome>{k});
}

TEST_CASE("class members enumerate in increasing genome order") {
  const auto wide = make_schema_partitioning(5, {1, 3});
  for (Theme k = 0; k < 4; ++k) {
    for (std::uint64_t j = 0; j + 1 < 8; ++j)
      CHECK(wide.class_member(k, j) < wide.class_member(k, j + 1));
    const auto members = wide.theme_class(k);
    for (std::uint64_t j = 0; j < members.size(); ++j)
      CHECK(wide.class_member(k, j) == members[j]);
  }
}

TEST_CASE("distribution construction and validation") {
  Eigen::ArrayXd good(2);
  good << 0.25, 0.75;
  const auto p = Distribution::from_weights(good);
  CHECK(p.size() == 2);
  CHECK(p(0) == doctest::Approx(0.25));
  CHECK(!p.is_zero());

  Eigen::ArrayXd negative(2);
  negative << -0.1, 1.1;
  CHECK_THROWS_AS(Distribution::from_weights(negative), validation_error);

  Eigen::ArrayXd off(2);
  off << 0.6, 0.6;
  CHECK_THROWS_AS(Distribution::from_weights(off), validation_error);

  const auto z = Distribution::zero(4);
  CHECK(z.is_zero());
  CHECK(z.weights().sum() == 0.0);
  // All-zero weights round-trip through from_weights as the zero function.
  CHECK(Distribution::from_weights(Eigen::ArrayXd::Zero(4)).is_zero());
}

TEST_CASE("uniform and point mass helpers") {
  const auto u = Distribution::uniform(4);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(u(i) == doctest::Approx(0.25));
  const auto single = Distribution::uniform(1);
  CHECK(single(0) == 1.0);
  const auto d = Distribution::point_mass(8, 3);
  CHECK(d(3) == 1.0);
  CHECK(d.weights().sum() == 1.0);
  CHECK_THROWS_AS(Distribution::point_mass(4, 4), validation_error);
}

TEST_CASE("normalized repairs tiny drift but rejects real corruption") {
  Eigen::ArrayXd drift(2);
  drift << 0.5 + 2e-11, 0.5;
  const auto repaired = Distribution::normalized(drift);
  CHECK(repaired.weights().sum() == doctest::Approx(1.0).epsilon(1e-15));

  // Drift below the repair threshold is left exactly as given.
  Eigen::ArrayXd negligible(2);
  negligible << 0.5 + 2e-13, 0.5;
  CHECK(Distribution::normalized(negligible)(0) == 0.5 + 2e-13);

  Eigen::ArrayXd tiny_negative(2);
  tiny_negative << -1e-12, 1.0;
  const auto clamped = Distribution::normalized(tiny_negative);
  CHECK(clamped(0) == 0.0);

  Eigen::ArrayXd corrupt(2);
  corrupt << 0.7, 0.7;
  CHECK_THROWS_AS(Distribution::normalized(corrupt), validation_error);
  Eigen::ArrayXd very_negative(2);
  very_negative << -0.1, 1.1;
  CHECK_THROWS_AS(Distribution::normalized(very_negative), validation_error);
}

TEST_CASE("manhattan distance frozen value and metric properties") {
  Eigen::ArrayXd a(2), b(2);
  a << 0.2, 0.8;
  b << 0.5, 0.5;
  CHECK(manhattan_distance(a, b) == doctest::Approx(0.6).epsilon(1e-15));

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 16);
    const auto x = oracle::random_weights(rng, n);
    const auto y = oracle::random_weights(rng, n);
    const auto z = oracle::random_weights(rng, n);
    const double dxy = manhattan_distance(x, y);
    CHECK(dxy >= 0.0);
    CHECK(manhattan_distance(x, x) == 0.0);
    CHECK(manhattan_distance(y, x) == doctest::Approx(dxy).epsilon(1e-15));
    CHECK(manhattan_distance(x, z) <= dxy + manhattan_distance(y, z) + 1e-15);
    // Between distributions the distance cannot exceed 2.
    CHECK(dxy <= 2.0);
  }

  const auto p = Distribution::uniform(4);
  const auto q = Distribution::point_mass(4, 0);
  CHECK(manhattan_distance(p, q) == doctest::Approx(1.5));
  Eigen::ArrayXd wrong(3);
  wrong << 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(manhattan_distance(p, Distribution::from_weights(wrong)),
                  validation_error);
}
