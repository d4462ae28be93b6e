#include "themegrain/core.hpp"

#include <algorithm>
#include <cmath>

namespace themegrain {
namespace {

std::string loci_to_string(const std::vector<int>& loci) {
  std::string s = "[";
  for (std::size_t i = 0; i < loci.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(loci[i]);
  }
  return s + "]";
}

}  // namespace

GenomeSpace::GenomeSpace(int length) : length_(length) {
  if (length < 1 || length > kMaxLength)
    throw validation_error("genome length " + std::to_string(length) +
                           " outside supported range [1, " +
                           std::to_string(kMaxLength) + "]");
}

ThemeSpace::ThemeSpace(int order) : order_(order) {
  if (order < 0 || order > GenomeSpace::kMaxLength)
    throw validation_error("theme order " + std::to_string(order) +
                           " outside supported range [0, " +
                           std::to_string(GenomeSpace::kMaxLength) + "]");
}

SchemaPartitioning::SchemaPartitioning(GenomeSpace space,
                                       std::vector<int> defined_loci)
    : space_(space), loci_(std::move(defined_loci)) {
  if (loci_.empty())
    throw validation_error("schema partitioning needs at least one defined locus");
  std::vector<int> sorted = loci_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= space_.length())
      throw validation_error("defined locus " + std::to_string(sorted[i]) +
                             " outside [0, " + std::to_string(space_.length()) +
                             ") for loci " + loci_to_string(loci_));
    if (i > 0 && sorted[i] == sorted[i - 1])
      throw validation_error("duplicate defined locus " +
                             std::to_string(sorted[i]) + " in loci " +
                             loci_to_string(loci_));
  }
  // Loci are kept in the order given; only validity needs the sorted copy.
  std::uint32_t defined_mask = 0;
  for (int locus : loci_) defined_mask |= 1u << locus;
  for (int pos = 0; pos < space_.length(); ++pos)
    if (!((defined_mask >> pos) & 1u)) free_loci_.push_back(pos);
}

Genome SchemaPartitioning::class_member(Theme k, std::uint64_t j) const {
  Genome g = 0;
  for (std::size_t i = 0; i < loci_.size(); ++i)
    g |= ((k >> i) & 1u) << loci_[i];
  // Spread j's bits over the free loci, low bit to lowest free position, so
  // j -> member is increasing in j.
  for (std::size_t i = 0; i < free_loci_.size(); ++i)
    g |= static_cast<Genome>((j >> i) & 1u) << free_loci_[i];
  return g;
}

std::vector<Genome> SchemaPartitioning::theme_class(Theme k) const {
  const std::uint64_t n = static_cast<std::uint64_t>(class_size());
  std::vector<Genome> members(n);
  for (std::uint64_t j = 0; j < n; ++j) members[j] = class_member(k, j);
  std::sort(members.begin(), members.end());
  return members;
}

SchemaPartitioning make_schema_partitioning(int length, std::vector<int> loci) {
  return SchemaPartitioning(GenomeSpace(length), std::move(loci));
}

SchemaPartitioning identity_partitioning(int length) {
  std::vector<int> loci(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) loci[static_cast<std::size_t>(i)] = i;
  return SchemaPartitioning(GenomeSpace(length), std::move(loci));
}

Distribution Distribution::from_weights(Eigen::ArrayXd weights) {
  if (weights.size() == 0)
    throw validation_error("distribution over an empty space");
  if ((weights < 0.0).any())
    throw validation_error("distribution has a negative weight");
  const double sum = weights.sum();
  if (sum == 0.0) return Distribution(std::move(weights), /*zero=*/true);
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw validation_error("distribution weights sum to " +
                           std::to_string(sum) + ", not 1");
  return Distribution(std::move(weights), /*zero=*/false);
}

Distribution Distribution::normalized(Eigen::ArrayXd weights) {
  if (weights.size() == 0)
    throw validation_error("distribution over an empty space");
  const double min = weights.minCoeff();
  if (min < 0.0) {
    if (min < -1e-9)
      throw validation_error(
          "operator output has coordinate " + std::to_string(min) +
          ", far below zero; this is a bug, not round-off");
    weights = weights.max(0.0);
  }
  const double sum = weights.sum();
  if (std::abs(sum - 1.0) > 1e-6)
    throw validation_error("operator output sums to " + std::to_string(sum) +
                           "; normalization lost");
  if (std::abs(sum - 1.0) > kRenormalizeDrift) weights /= sum;
  return Distribution(std::move(weights), /*zero=*/false);
}

Distribution Distribution::uniform(Eigen::Index size) {
  if (size <= 0) throw validation_error("distribution over an empty space");
  return Distribution(
      Eigen::ArrayXd::Constant(size, 1.0 / static_cast<double>(size)),
      /*zero=*/false);
}

Distribution Distribution::point_mass(Eigen::Index size, Eigen::Index at) {
  if (size <= 0) throw validation_error("distribution over an empty space");
  if (at < 0 || at >= size)
    throw validation_error("point mass at " + std::to_string(at) +
                           " outside space of size " + std::to_string(size));
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(size);
  w(at) = 1.0;
  return Distribution(std::move(w), /*zero=*/false);
}

Distribution Distribution::zero(Eigen::Index size) {
  if (size <= 0) throw validation_error("distribution over an empty space");
  return Distribution(Eigen::ArrayXd::Zero(size), /*zero=*/true);
}

}  // namespace themegrain
