#pragma once

#include "themegrain/core.hpp"
#include "themegrain/transmission.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace themegrain {

/// Coefficients under the unnormalized ±1 Walsh-Hadamard basis
/// psi_i(x) = (-1)^popcount(i & x). The forward transform is the plain
/// character sum v(i) = sum_x psi_i(x) p(x), so a proper distribution has
/// v(0) = 1; the inverse carries the 1/N factor.
struct WalshVector {
  Eigen::ArrayXd coeffs;

  Eigen::Index size() const { return coeffs.size(); }
  double operator()(Eigen::Index i) const { return coeffs(i); }
};

WalshVector walsh_transform(const Distribution& p);
Distribution walsh_inverse(const WalshVector& v);

namespace detail {
/// In-place fast Walsh-Hadamard butterfly, O(N log N); self-inverse up to
/// the 1/N factor. Length must be a power of two.
void fwht_inplace(Eigen::ArrayXd& data);
}  // namespace detail

/// Variation in the Walsh basis: mutation scales coefficient i by
/// (1-2*mu)^popcount(i); crossover maps coefficients by kind-specific sums
/// over submask splittings of each index. Total work is 3^length for
/// uniform crossover and length*2^length for one-point. Matches vary_naive
/// wherever the latter is feasible; supports every TransmissionSpec kind
/// (explicit raw tables have no Walsh form — use vary_naive).
Distribution vary_fast(const TransmissionSpec& spec, const Distribution& p);

struct MixingBenchRow {
  int length = 0;
  CrossoverKind kind = CrossoverKind::uniform;
  double mutation_rate = 0.0;
  std::string path;  // "fast" or "naive"
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;
};

/// Times vary_fast (and vary_naive when the guard admits it) on a seeded
/// random distribution, returning one row per path.
std::vector<MixingBenchRow> mixing_benchmark(int length, CrossoverKind kind,
                                             double mutation_rate,
                                             int repetitions,
                                             std::uint64_t seed = 0xbe7c);

}  // namespace themegrain
