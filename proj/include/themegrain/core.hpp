#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace themegrain {

/// Genomes and themes are bitstrings addressed as unsigned integers; bit 0
/// is the least significant bit.
using Genome = std::uint32_t;
using Theme = std::uint32_t;

/// Thrown when an input violates a documented precondition or a guard.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The set of all bitstrings of a fixed length, sized 2^length.
class GenomeSpace {
 public:
  /// Lengths above kMaxLength are rejected: one dense vector over the space
  /// is 2^length doubles, and 24 bits is already 128 MiB.
  static constexpr int kMaxLength = 24;

  explicit GenomeSpace(int length);

  int length() const { return length_; }
  Eigen::Index size() const { return Eigen::Index{1} << length_; }

  friend bool operator==(const GenomeSpace&, const GenomeSpace&) = default;

 private:
  int length_;
};

/// Co-domain of a schema partitioning: bitstrings of length `order`.
class ThemeSpace {
 public:
  explicit ThemeSpace(int order);

  int order() const { return order_; }
  Eigen::Index size() const { return Eigen::Index{1} << order_; }

  friend bool operator==(const ThemeSpace&, const ThemeSpace&) = default;

 private:
  int order_;
};

/// Surjective map from genomes to themes given by bit extraction at a fixed
/// set of defined loci. The theme of g packs g's bits at the defined loci
/// into the low bits of the theme integer, preserving locus order. Every
/// theme class has exactly 2^(length - order) members.
class SchemaPartitioning {
 public:
  SchemaPartitioning(GenomeSpace space, std::vector<int> defined_loci);

  const GenomeSpace& genome_space() const { return space_; }
  ThemeSpace theme_space() const { return ThemeSpace(order()); }
  int order() const { return static_cast<int>(loci_.size()); }
  const std::vector<int>& defined_loci() const { return loci_; }

  Theme apply(Genome g) const {
    Theme k = 0;
    for (std::size_t j = 0; j < loci_.size(); ++j)
      k |= ((g >> loci_[j]) & 1u) << j;
    return k;
  }

  Eigen::Index class_size() const {
    return Eigen::Index{1} << (space_.length() - order());
  }

  /// j-th smallest genome of the class of theme k, 0 <= j < class_size().
  /// Random access makes classes enumerable without materialization.
  Genome class_member(Theme k, std::uint64_t j) const;

  /// All genomes mapping to theme k, in ascending order.
  std::vector<Genome> theme_class(Theme k) const;

  bool is_identity() const { return order() == space_.length(); }

 private:
  GenomeSpace space_;
  std::vector<int> loci_;
  std::vector<int> free_loci_;  // positions not in loci_, ascending
};

SchemaPartitioning make_schema_partitioning(int length, std::vector<int> loci);
SchemaPartitioning identity_partitioning(int length);

/// A probability vector over a finite space, or the distinguished all-zero
/// function over that space (used as the "no mass" result of conditioning).
class Distribution {
 public:
  /// Tolerance on |sum - 1| accepted at construction.
  static constexpr double kSumTolerance = 1e-9;
  /// Operator outputs are renormalized when their drift exceeds this, so
  /// error cannot accumulate across epochs.
  static constexpr double kRenormalizeDrift = 1e-12;

  /// Validates: no negative weight, and either sum within kSumTolerance of
  /// one or exactly zero everywhere (the zero function).
  static Distribution from_weights(Eigen::ArrayXd weights);

  /// Lenient construction path for operator outputs: clamps negative
  /// round-off (rejecting anything below -1e-9 as a genuine error) and
  /// renormalizes when the drift exceeds kRenormalizeDrift.
  static Distribution normalized(Eigen::ArrayXd weights);

  static Distribution uniform(Eigen::Index size);
  static Distribution point_mass(Eigen::Index size, Eigen::Index at);
  static Distribution zero(Eigen::Index size);

  bool is_zero() const { return zero_; }
  Eigen::Index size() const { return w_.size(); }
  double operator()(Eigen::Index i) const { return w_(i); }
  const Eigen::ArrayXd& weights() const { return w_; }

 private:
  Distribution(Eigen::ArrayXd w, bool zero) : w_(std::move(w)), zero_(zero) {}

  Eigen::ArrayXd w_;
  bool zero_;
};

/// Sum of absolute coordinate differences between two equally-shaped
/// real-valued tables. A metric; at most 2 between two distributions.
template <typename DerivedA, typename DerivedB>
double manhattan_distance(const Eigen::ArrayBase<DerivedA>& a,
                          const Eigen::ArrayBase<DerivedB>& b) {
  if (a.size() != b.size())
    throw validation_error("manhattan_distance: size mismatch (" +
                           std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()) + ")");
  return (a.derived() - b.derived()).abs().sum();
}

inline double manhattan_distance(const Distribution& a, const Distribution& b) {
  return manhattan_distance(a.weights(), b.weights());
}

}  // namespace themegrain
