#include "themegrain/walsh.hpp"

#include "themegrain/detail/rng.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <string>

namespace themegrain {
namespace detail {

void fwht_inplace(Eigen::ArrayXd& data) {
  const Eigen::Index n = data.size();
  if (n < 1 || (n & (n - 1)) != 0)
    throw validation_error("walsh transform length " + std::to_string(n) +
                           " is not a power of two");
  for (Eigen::Index h = 1; h < n; h <<= 1)
    for (Eigen::Index block = 0; block < n; block += h << 1)
      for (Eigen::Index i = block; i < block + h; ++i) {
        const double a = data(i);
        const double b = data(i + h);
        data(i) = a + b;
        data(i + h) = a - b;
      }
}

}  // namespace detail

WalshVector walsh_transform(const Distribution& p) {
  Eigen::ArrayXd coeffs = p.weights();
  detail::fwht_inplace(coeffs);
  return WalshVector{std::move(coeffs)};
}

Distribution walsh_inverse(const WalshVector& v) {
  Eigen::ArrayXd w = v.coeffs;
  detail::fwht_inplace(w);
  w /= static_cast<double>(w.size());
  return Distribution::normalized(std::move(w));
}

Distribution vary_fast(const TransmissionSpec& spec, const Distribution& p) {
  const Eigen::Index n = Eigen::Index{1} << spec.length();
  if (p.size() != n)
    throw validation_error("vary_fast: distribution size " +
                           std::to_string(p.size()) + " does not match 2^" +
                           std::to_string(spec.length()));
  if (p.is_zero())
    throw validation_error("vary_fast: input is the zero function");
  const double mu = spec.mutation_rate();

  // Nothing to do: no crossover stage and mutation is the identity. Kept
  // exact rather than paying a transform round-trip's worth of round-off.
  if (spec.kind() == CrossoverKind::none && mu == 0.0) return p;

  Eigen::ArrayXd hat = p.weights();
  detail::fwht_inplace(hat);

  // Crossover. A mask m splits child bits between the parents, and the
  // characters factor along that split: the image of coefficient i is
  // sum_m w_m * hat(i & ~m) * hat(i & m). Only i's own bits matter in the
  // split, so kinds with structured mask laws collapse further.
  Eigen::ArrayXd mixed;
  switch (spec.kind()) {
    case CrossoverKind::none:
      mixed = std::move(hat);
      break;
    case CrossoverKind::uniform: {
      // Fair masks weight every split of i equally: the image is
      // 2^-popcount(i) * sum over submasks a of i of hat(a) * hat(i ^ a).
      // Submask enumeration makes the whole pass sum_i 2^popcount(i) = 3^l.
      mixed.resize(n);
      Eigen::ArrayXd half_pow(spec.length() + 1);
      for (int b = 0; b <= spec.length(); ++b) half_pow(b) = std::pow(0.5, b);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Genome gi = static_cast<Genome>(i);
        double acc = 0.0;
        Genome a = gi;
        while (true) {
          acc += hat(a) * hat(gi ^ a);
          if (a == 0) break;
          a = (a - 1) & gi;
        }
        mixed(i) = acc * half_pow(std::popcount(gi));
      }
      break;
    }
    case CrossoverKind::one_point:
    case CrossoverKind::mask_table: {
      const auto masks = spec.enumerate_masks();
      mixed = Eigen::ArrayXd::Zero(n);
      for (const auto& [mask, w] : masks)
        for (Eigen::Index i = 0; i < n; ++i) {
          const Genome gi = static_cast<Genome>(i);
          mixed(i) += w * hat(gi & ~mask) * hat(gi & mask);
        }
      break;
    }
  }

  // Mutation is diagonal here: independent bit flips scale coefficient i
  // by (1 - 2*mu)^popcount(i).
  if (mu > 0.0) {
    Eigen::ArrayXd damp(spec.length() + 1);
    for (int b = 0; b <= spec.length(); ++b)
      damp(b) = std::pow(1.0 - 2.0 * mu, b);
    for (Eigen::Index i = 0; i < n; ++i)
      mixed(i) *= damp(std::popcount(static_cast<Genome>(i)));
  }

  detail::fwht_inplace(mixed);
  mixed /= static_cast<double>(n);
  return Distribution::normalized(std::move(mixed));
}

namespace {

Distribution seeded_random_distribution(Eigen::Index size, std::uint64_t seed) {
  Eigen::ArrayXd w(size);
  for (Eigen::Index x = 0; x < size; ++x)
    w(x) = detail::unit_open(detail::counter_hash(seed, /*stream=*/51, x));
  // Normalize twice: the recomputed sum of w/sum can drift by ~size * eps,
  // which the strict constructor would reject at large sizes.
  w /= w.sum();
  w /= w.sum();
  return Distribution::from_weights(std::move(w));
}

TransmissionSpec spec_for_kind(int length, CrossoverKind kind, double mu) {
  switch (kind) {
    case CrossoverKind::uniform:
      return TransmissionSpec::uniform_crossover(length, mu);
    case CrossoverKind::one_point:
      return TransmissionSpec::one_point_crossover(length, mu);
    case CrossoverKind::none:
      return TransmissionSpec::mutation_only(length, mu);
    case CrossoverKind::mask_table:
      break;
  }
  throw validation_error("mixing_benchmark: explicit mask tables not benchmarked");
}

}  // namespace

std::vector<MixingBenchRow> mixing_benchmark(int length, CrossoverKind kind,
                                             double mutation_rate,
                                             int repetitions,
                                             std::uint64_t seed) {
  if (repetitions < 1)
    throw validation_error("mixing_benchmark: repetitions must be positive");
  const TransmissionSpec spec = spec_for_kind(length, kind, mutation_rate);
  const Distribution p =
      seeded_random_distribution(Eigen::Index{1} << length, seed);

  auto time_path = [&](const char* path, auto&& run) {
    MixingBenchRow row;
    row.length = length;
    row.kind = kind;
    row.mutation_rate = mutation_rate;
    row.path = path;
    std::vector<double> secs(static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      run();
      const auto t1 = std::chrono::steady_clock::now();
      secs[static_cast<std::size_t>(r)] =
          std::chrono::duration<double>(t1 - t0).count();
    }
    double mean = 0.0;
    for (double s : secs) mean += s;
    mean /= static_cast<double>(repetitions);
    double var = 0.0;
    for (double s : secs) var += (s - mean) * (s - mean);
    row.mean_seconds = mean;
    row.stddev_seconds =
        repetitions > 1 ? std::sqrt(var / static_cast<double>(repetitions - 1))
                        : 0.0;
    return row;
  };

  std::vector<MixingBenchRow> rows;
  if ((spec.arity() + 1) * length <= 30)
    rows.push_back(time_path("naive", [&] { vary_naive(spec, p); }));
  rows.push_back(time_path("fast", [&] { vary_fast(spec, p); }));
  return rows;
}

}  // namespace themegrain
