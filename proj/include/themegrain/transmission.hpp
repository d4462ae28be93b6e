#pragma once

#include "themegrain/core.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace themegrain {

enum class CrossoverKind {
  uniform,    // each mask bit i.i.d. fair coin
  one_point,  // the length cut masks (1<<c)-1, c = 1..length, equiprobable
  none,       // no crossover stage; arity 1
  mask_table, // explicit mask distribution
};

const char* to_string(CrossoverKind kind);

/// Recombination followed by independent per-bit mutation. Crossover picks
/// a mask m from the kind's distribution and builds the intermediate child
/// (x1 & ~m) | (x2 & m); mutation then flips each bit independently with
/// probability mutation_rate. The stage order is fixed: crossover first.
class TransmissionSpec {
 public:
  static TransmissionSpec uniform_crossover(int length, double mutation_rate);
  static TransmissionSpec one_point_crossover(int length, double mutation_rate);
  static TransmissionSpec mutation_only(int length, double mutation_rate);
  /// Explicit mask distribution over the genome space (size 2^length,
  /// summing to 1 within the construction tolerance).
  static TransmissionSpec with_mask_table(int length, Eigen::ArrayXd mask_probs,
                                          double mutation_rate);

  int length() const { return length_; }
  int arity() const { return kind_ == CrossoverKind::none ? 1 : 2; }
  CrossoverKind kind() const { return kind_; }
  double mutation_rate() const { return mu_; }
  /// Only meaningful for kind() == mask_table.
  const Eigen::ArrayXd& mask_probs() const { return mask_probs_; }

  /// Masks with nonzero probability, as (mask, probability) pairs, in
  /// ascending mask order. For `uniform` this is all 2^length masks.
  std::vector<std::pair<Genome, double>> enumerate_masks() const;

 private:
  TransmissionSpec(int length, CrossoverKind kind, double mu,
                   Eigen::ArrayXd mask_probs);

  int length_;
  CrossoverKind kind_;
  double mu_;
  Eigen::ArrayXd mask_probs_;
};

/// A dense conditional distribution over child genomes given an m-tuple of
/// parent genomes, stored flat with parents major and child fastest:
/// value(child | p1..pm) sits at ((p1*S + p2)*S + ...)*S + child.
/// Also the representation of derived theme-level transmission.
class TransmissionTable {
 public:
  /// Row-sum tolerance accepted from external sources.
  static constexpr double kRowSumTolerance = 1e-9;

  static TransmissionTable from_flat(Eigen::Index space_size, int arity,
                                     Eigen::ArrayXd values);

  Eigen::Index space_size() const { return size_; }
  int arity() const { return arity_; }
  const Eigen::ArrayXd& flat() const { return values_; }

  double operator()(Genome child, const std::vector<Genome>& parents) const {
    return values_(row_offset(parents) + child);
  }

  /// Flat index of the first child entry for this parent tuple.
  Eigen::Index row_offset(const std::vector<Genome>& parents) const;

 private:
  TransmissionTable(Eigen::Index size, int arity, Eigen::ArrayXd values)
      : size_(size), arity_(arity), values_(std::move(values)) {}

  Eigen::Index size_;
  int arity_;
  Eigen::ArrayXd values_;
};

/// Theme-level transmission derived from a genome-level one; same layout,
/// over the theme space.
using ThemeTransmission = TransmissionTable;

/// Exact probability that variation produces `child` from `parents`.
double transmission_prob(const TransmissionSpec& spec, Genome child,
                         const std::vector<Genome>& parents);
double transmission_prob(const TransmissionTable& table, Genome child,
                         const std::vector<Genome>& parents);

/// Variation by direct summation over parent tuples:
/// out(x) = sum over tuples of T(x | tuple) * product of p(parent).
/// Cost grows as space^(arity+1); guarded at (arity+1) * length <= 30,
/// which puts the arity-2 ceiling at length 10.
Distribution vary_naive(const TransmissionSpec& spec, const Distribution& p);
Distribution vary_naive(const TransmissionTable& table, const Distribution& p);

/// Theme-level transmission induced by a spec under a partitioning:
/// D(k | k1..km) = probability the child lands in class k given parents
/// drawn from classes k1..km. For mask crossover + per-bit mutation this is
/// independent of which class representatives stand in for the parents
/// (mutation factorizes per bit and free loci integrate out), so it is
/// computed in closed form per defined locus rather than by enumeration.
ThemeTransmission theme_transmission(const TransmissionSpec& spec,
                                     const SchemaPartitioning& beta);

/// Same derivation for an explicit table: parents are replaced by the
/// rep_ordinal-th member of their classes and child probability is summed
/// over each child class. Only meaningful when the table is ambivalent
/// under beta — representatives then don't matter; check separately.
ThemeTransmission theme_transmission(const TransmissionTable& table,
                                     const SchemaPartitioning& beta,
                                     std::uint64_t rep_ordinal = 0);

enum class AmbivalenceMode { exhaustive, sampled };

struct AmbivalenceReport {
  bool ambivalent = true;
  double max_deviation = 0.0;
  /// On failure: two parent tuples with theme-identical parents whose
  /// class-sum vectors differ by more than the tolerance. witness_a is the
  /// canonical (minimum-genome) tuple of the offending theme tuple.
  std::vector<Genome> witness_a;
  std::vector<Genome> witness_b;
  std::uint64_t tuples_checked = 0;
};

/// Default tolerance separating float noise from structural violations.
inline constexpr double kAmbivalenceTolerance = 1e-9;

/// Tests whether the class-sum of the transmission depends only on the
/// parents' theme classes. Every parent tuple's class-sum vector (mass the
/// child deposits into each theme class) is compared against the vector of
/// the canonical tuple holding the same themes; max_deviation is the
/// largest Manhattan distance seen. Exhaustive mode visits every parent
/// tuple (guarded at arity * length <= 16); sampled mode draws `samples`
/// tuples deterministically from `seed`.
AmbivalenceReport check_ambivalence(const TransmissionSpec& spec,
                                    const SchemaPartitioning& beta,
                                    AmbivalenceMode mode,
                                    std::uint64_t samples = 0,
                                    double tolerance = kAmbivalenceTolerance,
                                    std::uint64_t seed = 0x7ac5);
AmbivalenceReport check_ambivalence(const TransmissionTable& table,
                                    const SchemaPartitioning& beta,
                                    AmbivalenceMode mode,
                                    std::uint64_t samples = 0,
                                    double tolerance = kAmbivalenceTolerance,
                                    std::uint64_t seed = 0x7ac5);

}  // namespace themegrain
