#include "themegrain/transmission.hpp"

#include "themegrain/detail/parallel.hpp"
#include "themegrain/detail/rng.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <utility>

namespace themegrain {
namespace {

inline Genome cross(Genome x1, Genome x2, Genome mask) {
  return (x1 & ~mask) | (x2 & mask);
}

inline int popcount(Genome g) { return std::popcount(g); }

/// pow_table(mu, n)[d] = mu^d * (1-mu)^(n-d): probability that independent
/// per-bit mutation flips exactly a given set of d bits out of n.
Eigen::ArrayXd flip_pattern_probs(double mu, int n) {
  Eigen::ArrayXd t(n + 1);
  for (int d = 0; d <= n; ++d)
    t(d) = std::pow(mu, d) * std::pow(1.0 - mu, n - d);
  return t;
}

void require_arity(const std::vector<Genome>& parents, int arity,
                   const char* what) {
  if (static_cast<int>(parents.size()) != arity)
    throw validation_error(std::string(what) + ": got " +
                           std::to_string(parents.size()) + " parents, arity is " +
                           std::to_string(arity));
}

void require_genomes(const std::vector<Genome>& parents, Eigen::Index size,
                     const char* what) {
  for (Genome g : parents)
    if (static_cast<Eigen::Index>(g) >= size)
      throw validation_error(std::string(what) + ": parent " + std::to_string(g) +
                             " outside space of size " + std::to_string(size));
}

/// Direct-summation cost guard: space^(arity+1) coordinate operations.
/// 2^30 is the ceiling — the arity-2 limit of length 10.
void require_naive_feasible(int length, int arity, const char* what) {
  if ((arity + 1) * length > 30)
    throw validation_error(
        std::string(what) + ": direct summation over 2^" +
        std::to_string((arity + 1) * length) +
        " terms exceeds the 2^30 ceiling (length " + std::to_string(length) +
        ", arity " + std::to_string(arity) + "); use the Walsh path");
}

int log2_size(Eigen::Index size, const char* what) {
  if (size < 2 || (size & (size - 1)) != 0)
    throw validation_error(std::string(what) + ": size " + std::to_string(size) +
                           " is not a power of two");
  return std::countr_zero(static_cast<std::uint64_t>(size));
}

}  // namespace

const char* to_string(CrossoverKind kind) {
  switch (kind) {
    case CrossoverKind::uniform: return "uniform";
    case CrossoverKind::one_point: return "one_point";
    case CrossoverKind::none: return "none";
    case CrossoverKind::mask_table: return "mask_table";
  }
  return "?";
}

TransmissionSpec::TransmissionSpec(int length, CrossoverKind kind, double mu,
                                   Eigen::ArrayXd mask_probs)
    : length_(length), kind_(kind), mu_(mu), mask_probs_(std::move(mask_probs)) {
  GenomeSpace space(length);  // validates the length range
  if (!(mu >= 0.0 && mu <= 0.5))
    throw validation_error("mutation rate " + std::to_string(mu) +
                           " outside [0, 0.5]");
  if (kind_ == CrossoverKind::mask_table) {
    if (mask_probs_.size() != space.size())
      throw validation_error("mask table has " +
                             std::to_string(mask_probs_.size()) +
                             " entries, expected " + std::to_string(space.size()));
    if ((mask_probs_ < 0.0).any())
      throw validation_error("mask table has a negative probability");
    if (std::abs(mask_probs_.sum() - 1.0) > Distribution::kSumTolerance)
      throw validation_error("mask table sums to " +
                             std::to_string(mask_probs_.sum()) + ", not 1");
  }
}

TransmissionSpec TransmissionSpec::uniform_crossover(int length, double mu) {
  return TransmissionSpec(length, CrossoverKind::uniform, mu, {});
}

TransmissionSpec TransmissionSpec::one_point_crossover(int length, double mu) {
  return TransmissionSpec(length, CrossoverKind::one_point, mu, {});
}

TransmissionSpec TransmissionSpec::mutation_only(int length, double mu) {
  return TransmissionSpec(length, CrossoverKind::none, mu, {});
}

TransmissionSpec TransmissionSpec::with_mask_table(int length,
                                                   Eigen::ArrayXd mask_probs,
                                                   double mu) {
  return TransmissionSpec(length, CrossoverKind::mask_table, mu,
                          std::move(mask_probs));
}

std::vector<std::pair<Genome, double>> TransmissionSpec::enumerate_masks() const {
  std::vector<std::pair<Genome, double>> masks;
  const Eigen::Index n = Eigen::Index{1} << length_;
  switch (kind_) {
    case CrossoverKind::uniform: {
      masks.reserve(static_cast<std::size_t>(n));
      const double w = 1.0 / static_cast<double>(n);
      for (Eigen::Index m = 0; m < n; ++m)
        masks.emplace_back(static_cast<Genome>(m), w);
      break;
    }
    case CrossoverKind::one_point: {
      // Cut after bit c-1: low c bits from the second parent. c = length
      // yields the full mask (child - second parent), the degenerate end of
      // the cut range.
      masks.reserve(static_cast<std::size_t>(length_));
      const double w = 1.0 / static_cast<double>(length_);
      for (int c = 1; c <= length_; ++c)
        masks.emplace_back(static_cast<Genome>((std::uint64_t{1} << c) - 1), w);
      break;
    }
    case CrossoverKind::none:
      masks.emplace_back(0u, 1.0);
      break;
    case CrossoverKind::mask_table:
      for (Eigen::Index m = 0; m < mask_probs_.size(); ++m)
        if (mask_probs_(m) > 0.0)
          masks.emplace_back(static_cast<Genome>(m), mask_probs_(m));
      break;
  }
  return masks;
}

TransmissionTable TransmissionTable::from_flat(Eigen::Index space_size,
                                               int arity,
                                               Eigen::ArrayXd values) {
  log2_size(space_size, "transmission table");
  if (arity < 1)
    throw validation_error("transmission table arity must be at least 1");
  double expected = static_cast<double>(space_size);
  for (int i = 0; i < arity; ++i) expected *= static_cast<double>(space_size);
  if (static_cast<double>(values.size()) != expected)
    throw validation_error("transmission table has " +
                           std::to_string(values.size()) +
                           " entries, expected size^(arity+1) = " +
                           std::to_string(static_cast<std::int64_t>(expected)));
  if ((values < 0.0).any())
    throw validation_error("transmission table has a negative entry");
  const Eigen::Index rows = values.size() / space_size;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double sum = values.segment(r * space_size, space_size).sum();
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw validation_error("transmission table row " + std::to_string(r) +
                             " sums to " + std::to_string(sum) + ", not 1");
  }
  return TransmissionTable(space_size, arity, std::move(values));
}

Eigen::Index TransmissionTable::row_offset(
    const std::vector<Genome>& parents) const {
  require_arity(parents, arity_, "transmission table");
  require_genomes(parents, size_, "transmission table");
  Eigen::Index idx = 0;
  for (Genome g : parents) idx = idx * size_ + static_cast<Eigen::Index>(g);
  return idx * size_;
}

double transmission_prob(const TransmissionSpec& spec, Genome child,
                         const std::vector<Genome>& parents) {
  require_arity(parents, spec.arity(), "transmission_prob");
  const Eigen::Index n = Eigen::Index{1} << spec.length();
  require_genomes(parents, n, "transmission_prob");
  if (static_cast<Eigen::Index>(child) >= n)
    throw validation_error("transmission_prob: child outside space");
  const double mu = spec.mutation_rate();

  if (spec.kind() == CrossoverKind::none) {
    const int d = popcount(child ^ parents[0]);
    return std::pow(mu, d) * std::pow(1.0 - mu, spec.length() - d);
  }
  if (spec.kind() == CrossoverKind::uniform) {
    // Mask bits are independent fair coins, so the probability factorizes
    // per bit: each child bit comes from parent 1 or parent 2 with equal
    // weight, then survives or flips under mutation.
    double prob = 1.0;
    for (int b = 0; b < spec.length(); ++b) {
      const unsigned cb = (child >> b) & 1u;
      const double via1 = ((parents[0] >> b) & 1u) == cb ? 1.0 - mu : mu;
      const double via2 = ((parents[1] >> b) & 1u) == cb ? 1.0 - mu : mu;
      prob *= 0.5 * (via1 + via2);
    }
    return prob;
  }
  const Eigen::ArrayXd mut = flip_pattern_probs(mu, spec.length());
  double prob = 0.0;
  for (const auto& [mask, w] : spec.enumerate_masks())
    prob += w * mut(popcount(child ^ cross(parents[0], parents[1], mask)));
  return prob;
}

double transmission_prob(const TransmissionTable& table, Genome child,
                         const std::vector<Genome>& parents) {
  if (static_cast<Eigen::Index>(child) >= table.space_size())
    throw validation_error("transmission_prob: child outside space");
  return table(child, parents);
}

Distribution vary_naive(const TransmissionSpec& spec, const Distribution& p) {
  const Eigen::Index n = Eigen::Index{1} << spec.length();
  if (p.size() != n)
    throw validation_error("vary_naive: distribution size " +
                           std::to_string(p.size()) + " does not match 2^" +
                           std::to_string(spec.length()));
  if (p.is_zero())
    throw validation_error("vary_naive: input is the zero function");
  require_naive_feasible(spec.length(), spec.arity(), "vary_naive");
  const double mu = spec.mutation_rate();

  // Stage 1: crossover. Scatter parent-pair mass through every mask.
  Eigen::ArrayXd q;
  if (spec.kind() == CrossoverKind::none) {
    q = p.weights();
  } else {
    q = Eigen::ArrayXd::Zero(n);
    if (spec.kind() == CrossoverKind::uniform) {
      // All masks share weight 1/n; hoist it and scale once at the end.
      for (Eigen::Index x1 = 0; x1 < n; ++x1) {
        const double w1 = p(x1);
        if (w1 == 0.0) continue;
        for (Eigen::Index x2 = 0; x2 < n; ++x2) {
          const double w = w1 * p(x2);
          if (w == 0.0) continue;
          const Genome g1 = static_cast<Genome>(x1);
          const Genome g2 = static_cast<Genome>(x2);
          for (Genome m = 0; m < static_cast<Genome>(n); ++m)
            q(cross(g1, g2, m)) += w;
        }
      }
      q /= static_cast<double>(n);
    } else {
      const auto masks = spec.enumerate_masks();
      for (Eigen::Index x1 = 0; x1 < n; ++x1) {
        const double w1 = p(x1);
        if (w1 == 0.0) continue;
        for (Eigen::Index x2 = 0; x2 < n; ++x2) {
          const double w = w1 * p(x2);
          if (w == 0.0) continue;
          for (const auto& [mask, wm] : masks)
            q(cross(static_cast<Genome>(x1), static_cast<Genome>(x2), mask)) +=
                w * wm;
        }
      }
    }
  }

  // Stage 2: per-bit mutation, a convolution against flip-pattern
  // probabilities indexed by Hamming distance.
  if (mu == 0.0) return Distribution::normalized(std::move(q));
  const Eigen::ArrayXd mut = flip_pattern_probs(mu, spec.length());
  Eigen::ArrayXd out(n);
  detail::parallel_chunks(0, n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t x = lo; x < hi; ++x) {
      double acc = 0.0;
      for (Eigen::Index c = 0; c < n; ++c)
        acc += q(c) * mut(popcount(static_cast<Genome>(x ^ c)));
      out(x) = acc;
    }
  });
  return Distribution::normalized(std::move(out));
}

Distribution vary_naive(const TransmissionTable& table, const Distribution& p) {
  const Eigen::Index n = table.space_size();
  if (p.size() != n)
    throw validation_error("vary_naive: distribution size " +
                           std::to_string(p.size()) +
                           " does not match table space " + std::to_string(n));
  if (p.is_zero())
    throw validation_error("vary_naive: input is the zero function");
  require_naive_feasible(log2_size(n, "vary_naive"), table.arity(),
                         "vary_naive");
  const int m = table.arity();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  // Odometer over all parent tuples, ascending; child index is fastest in
  // the flat layout, so each tuple contributes one contiguous row.
  std::vector<Eigen::Index> tuple(static_cast<std::size_t>(m), 0);
  const double* flat = table.flat().data();
  while (true) {
    double w = 1.0;
    for (Eigen::Index g : tuple) w *= p(g);
    if (w != 0.0) {
      Eigen::Index row = 0;
      for (Eigen::Index g : tuple) row = row * n + g;
      row *= n;
      for (Eigen::Index c = 0; c < n; ++c) out(c) += w * flat[row + c];
    }
    int digit = m - 1;
    while (digit >= 0 && ++tuple[static_cast<std::size_t>(digit)] == n)
      tuple[static_cast<std::size_t>(digit--)] = 0;
    if (digit < 0) break;
  }
  return Distribution::normalized(std::move(out));
}

ThemeTransmission theme_transmission(const TransmissionSpec& spec,
                                     const SchemaPartitioning& beta) {
  if (beta.genome_space().length() != spec.length())
    throw validation_error("theme_transmission: partitioning is over length " +
                           std::to_string(beta.genome_space().length()) +
                           ", transmission over " + std::to_string(spec.length()));
  const int order = beta.order();
  const Eigen::Index k_count = beta.theme_space().size();
  const auto& loci = beta.defined_loci();
  const double mu = spec.mutation_rate();
  const int m = spec.arity();

  Eigen::Index rows = 1;
  for (int i = 0; i < m; ++i) rows *= k_count;
  Eigen::ArrayXd flat(rows * k_count);

  // Mutation acts per bit and undefined loci integrate out of class sums,
  // so the child-class probability given the crossover intermediate depends
  // only on the intermediate's bits at the defined loci. Each entry is a
  // sum over masks of a product over defined loci — no enumeration of the
  // underlying genome space.
  const Eigen::ArrayXd mut = flip_pattern_probs(mu, order);

  if (spec.kind() == CrossoverKind::uniform) {
    // Fair mask bits factorize the mask sum per locus as well; the result
    // is exactly uniform crossover + mutation on the theme space.
    for (Theme k1 = 0; k1 < static_cast<Theme>(k_count); ++k1)
      for (Theme k2 = 0; k2 < static_cast<Theme>(k_count); ++k2) {
        const Eigen::Index row = (static_cast<Eigen::Index>(k1) * k_count +
                                  static_cast<Eigen::Index>(k2)) *
                                 k_count;
        for (Theme k = 0; k < static_cast<Theme>(k_count); ++k) {
          double prob = 1.0;
          for (int j = 0; j < order; ++j) {
            const unsigned kb = (k >> j) & 1u;
            const double via1 = ((k1 >> j) & 1u) == kb ? 1.0 - mu : mu;
            const double via2 = ((k2 >> j) & 1u) == kb ? 1.0 - mu : mu;
            prob *= 0.5 * (via1 + via2);
          }
          flat(row + k) = prob;
        }
      }
    return TransmissionTable::from_flat(k_count, 2, std::move(flat));
  }

  if (spec.kind() == CrossoverKind::none) {
    for (Theme k1 = 0; k1 < static_cast<Theme>(k_count); ++k1) {
      const Eigen::Index row = static_cast<Eigen::Index>(k1) * k_count;
      for (Theme k = 0; k < static_cast<Theme>(k_count); ++k)
        flat(row + k) = mut(popcount(k ^ k1));
    }
    return TransmissionTable::from_flat(k_count, 1, std::move(flat));
  }

  // one_point / mask_table: enumerate masks, but only their defined-loci
  // pattern matters.
  const auto masks = spec.enumerate_masks();
  std::vector<std::pair<Theme, double>> theme_masks;
  theme_masks.reserve(masks.size());
  for (const auto& [mask, w] : masks) {
    Theme tm = 0;
    for (int j = 0; j < order; ++j) tm |= ((mask >> loci[j]) & 1u) << j;
    theme_masks.emplace_back(tm, w);
  }
  for (Theme k1 = 0; k1 < static_cast<Theme>(k_count); ++k1)
    for (Theme k2 = 0; k2 < static_cast<Theme>(k_count); ++k2) {
      const Eigen::Index row = (static_cast<Eigen::Index>(k1) * k_count +
                                static_cast<Eigen::Index>(k2)) *
                               k_count;
      for (Theme k = 0; k < static_cast<Theme>(k_count); ++k) {
        double prob = 0.0;
        for (const auto& [tm, w] : theme_masks)
          prob += w * mut(popcount(k ^ cross(k1, k2, tm)));
        flat(row + k) = prob;
      }
    }
  return TransmissionTable::from_flat(k_count, 2, std::move(flat));
}

ThemeTransmission theme_transmission(const TransmissionTable& table,
                                     const SchemaPartitioning& beta,
                                     std::uint64_t rep_ordinal) {
  if (beta.genome_space().size() != table.space_size())
    throw validation_error("theme_transmission: partitioning space " +
                           std::to_string(beta.genome_space().size()) +
                           " does not match table space " +
                           std::to_string(table.space_size()));
  if (rep_ordinal >= static_cast<std::uint64_t>(beta.class_size()))
    throw validation_error("theme_transmission: representative ordinal " +
                           std::to_string(rep_ordinal) + " outside class size " +
                           std::to_string(beta.class_size()));
  const Eigen::Index n = table.space_size();
  const Eigen::Index k_count = beta.theme_space().size();
  const int m = table.arity();

  Eigen::Index rows = 1;
  for (int i = 0; i < m; ++i) rows *= k_count;
  Eigen::ArrayXd flat = Eigen::ArrayXd::Zero(rows * k_count);

  std::vector<Theme> themes(static_cast<std::size_t>(m), 0);
  std::vector<Genome> reps(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < themes.size(); ++i)
      reps[i] = beta.class_member(themes[i], rep_ordinal);
    const Eigen::Index src = table.row_offset(reps);
    const Eigen::Index dst = r * k_count;
    for (Eigen::Index c = 0; c < n; ++c)
      flat(dst + beta.apply(static_cast<Genome>(c))) += table.flat()(src + c);
    int digit = m - 1;
    while (digit >= 0 && ++themes[static_cast<std::size_t>(digit)] ==
                             static_cast<Theme>(k_count))
      themes[static_cast<std::size_t>(digit--)] = 0;
  }
  return TransmissionTable::from_flat(k_count, m, std::move(flat));
}

namespace {

/// Shared machinery for the ambivalence checker: computes, for a concrete
/// parent tuple, the vector of child-class masses. Works literally from the
/// parents' genomes — no theme-level shortcut, otherwise the check would be
/// circular for mask-based kinds.
class ClassSumEvaluator {
 public:
  ClassSumEvaluator(const TransmissionSpec* spec, const TransmissionTable* table,
                    const SchemaPartitioning& beta)
      : spec_(spec), table_(table), beta_(beta) {
    const Eigen::Index n = beta.genome_space().size();
    theme_of_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index c = 0; c < n; ++c)
      theme_of_[static_cast<std::size_t>(c)] = beta.apply(static_cast<Genome>(c));
    if (spec_) {
      masks_ = spec_->enumerate_masks();
      class_mut_ = flip_pattern_probs(spec_->mutation_rate(), beta.order());
      scatter_ = Eigen::ArrayXd::Zero(n);
    }
  }

  int arity() const { return spec_ ? spec_->arity() : table_->arity(); }

  Eigen::ArrayXd operator()(const std::vector<Genome>& parents) {
    const Eigen::Index k_count = beta_.theme_space().size();
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(k_count);
    if (table_) {
      const Eigen::Index src = table_->row_offset(parents);
      const Eigen::Index n = table_->space_size();
      for (Eigen::Index c = 0; c < n; ++c)
        v(theme_of_[static_cast<std::size_t>(c)]) += table_->flat()(src + c);
      return v;
    }
    if (spec_->kind() == CrossoverKind::none) {
      // Point intermediate: class mass is the chance mutation moves the
      // parent's defined bits to each class pattern (free bits sum out).
      const Theme t = theme_of_[parents[0]];
      for (Eigen::Index k = 0; k < k_count; ++k)
        v(k) = class_mut_(popcount(static_cast<Theme>(k) ^ t));
      return v;
    }
    // Crossover intermediates, then the same per-pattern mutation factor.
    touched_.clear();
    for (const auto& [mask, w] : masks_) {
      const Genome c = cross(parents[0], parents[1], mask);
      if (scatter_(c) == 0.0) touched_.push_back(c);
      scatter_(c) += w;
    }
    for (Genome c : touched_) {
      const double qc = scatter_(c);
      const Theme t = theme_of_[c];
      for (Eigen::Index k = 0; k < k_count; ++k)
        v(k) += qc * class_mut_(popcount(static_cast<Theme>(k) ^ t));
      scatter_(c) = 0.0;
    }
    return v;
  }

 private:
  const TransmissionSpec* spec_;
  const TransmissionTable* table_;
  const SchemaPartitioning& beta_;
  std::vector<Theme> theme_of_;
  std::vector<std::pair<Genome, double>> masks_;
  Eigen::ArrayXd class_mut_;
  Eigen::ArrayXd scatter_;
  std::vector<Genome> touched_;
};

AmbivalenceReport run_ambivalence_check(ClassSumEvaluator eval,
                                        const SchemaPartitioning& beta,
                                        AmbivalenceMode mode,
                                        std::uint64_t samples, double tolerance,
                                        std::uint64_t seed) {
  const int m = eval.arity();
  const int length = beta.genome_space().length();
  const Eigen::Index n = beta.genome_space().size();
  const Eigen::Index k_count = beta.theme_space().size();
  const std::uint64_t class_n = static_cast<std::uint64_t>(beta.class_size());

  // Class-sum vectors of the canonical (minimum-genome) representative
  // tuples, built lazily per theme tuple.
  std::vector<Eigen::ArrayXd> canonical;
  std::vector<char> canonical_ready;
  Eigen::Index tuple_count = 1;
  for (int i = 0; i < m; ++i) tuple_count *= k_count;
  canonical.resize(static_cast<std::size_t>(tuple_count));
  canonical_ready.assign(static_cast<std::size_t>(tuple_count), 0);
  std::vector<Genome> scratch(static_cast<std::size_t>(m));
  auto canonical_vector = [&](const std::vector<Theme>& themes,
                              Eigen::Index flat) -> const Eigen::ArrayXd& {
    if (!canonical_ready[static_cast<std::size_t>(flat)]) {
      for (std::size_t i = 0; i < themes.size(); ++i)
        scratch[i] = beta.class_member(themes[i], 0);
      canonical[static_cast<std::size_t>(flat)] = eval(scratch);
      canonical_ready[static_cast<std::size_t>(flat)] = 1;
    }
    return canonical[static_cast<std::size_t>(flat)];
  };

  AmbivalenceReport report;
  std::vector<Theme> themes(static_cast<std::size_t>(m));
  auto inspect = [&](const std::vector<Genome>& parents) {
    Eigen::Index flat = 0;
    for (std::size_t i = 0; i < parents.size(); ++i) {
      themes[i] = beta.apply(parents[i]);
      flat = flat * k_count + themes[i];
    }
    const Eigen::ArrayXd& base = canonical_vector(themes, flat);
    const double dev = manhattan_distance(base, eval(parents));
    ++report.tuples_checked;
    if (dev > report.max_deviation) report.max_deviation = dev;
    if (dev > tolerance && report.witness_b.empty()) {
      for (std::size_t i = 0; i < parents.size(); ++i)
        scratch[i] = beta.class_member(themes[i], 0);
      report.witness_a = scratch;
      report.witness_b = parents;
    }
  };

  if (mode == AmbivalenceMode::exhaustive) {
    if (m * length > 16)
      throw validation_error(
          "check_ambivalence: exhaustive mode over 2^" +
          std::to_string(m * length) +
          " parent tuples exceeds the 2^16 ceiling; use sampled mode");
    std::vector<Genome> parents(static_cast<std::size_t>(m), 0);
    while (true) {
      inspect(parents);
      int digit = m - 1;
      while (digit >= 0 && ++parents[static_cast<std::size_t>(digit)] ==
                               static_cast<Genome>(n))
        parents[static_cast<std::size_t>(digit--)] = 0;
      if (digit < 0) break;
    }
  } else {
    if (samples == 0)
      throw validation_error("check_ambivalence: sampled mode needs samples > 0");
    std::vector<Genome> parents(static_cast<std::size_t>(m));
    for (std::uint64_t s = 0; s < samples; ++s) {
      for (int i = 0; i < m; ++i) {
        const Theme k = static_cast<Theme>(
            detail::counter_hash(seed, 2 * static_cast<std::uint64_t>(i), s) %
            static_cast<std::uint64_t>(k_count));
        const std::uint64_t j =
            detail::counter_hash(seed, 2 * static_cast<std::uint64_t>(i) + 1, s) %
            class_n;
        parents[static_cast<std::size_t>(i)] = beta.class_member(k, j);
      }
      inspect(parents);
    }
  }
  report.ambivalent = report.max_deviation <= tolerance;
  if (report.ambivalent) {
    report.witness_a.clear();
    report.witness_b.clear();
  }
  return report;
}

}  // namespace

AmbivalenceReport check_ambivalence(const TransmissionSpec& spec,
                                    const SchemaPartitioning& beta,
                                    AmbivalenceMode mode, std::uint64_t samples,
                                    double tolerance, std::uint64_t seed) {
  if (beta.genome_space().length() != spec.length())
    throw validation_error("check_ambivalence: partitioning is over length " +
                           std::to_string(beta.genome_space().length()) +
                           ", transmission over " + std::to_string(spec.length()));
  return run_ambivalence_check(ClassSumEvaluator(&spec, nullptr, beta), beta,
                               mode, samples, tolerance, seed);
}

AmbivalenceReport check_ambivalence(const TransmissionTable& table,
                                    const SchemaPartitioning& beta,
                                    AmbivalenceMode mode, std::uint64_t samples,
                                    double tolerance, std::uint64_t seed) {
  if (beta.genome_space().size() != table.space_size())
    throw validation_error("check_ambivalence: partitioning space " +
                           std::to_string(beta.genome_space().size()) +
                           " does not match table space " +
                           std::to_string(table.space_size()));
  return run_ambivalence_check(ClassSumEvaluator(nullptr, &table, beta), beta,
                               mode, samples, tolerance, seed);
}

}  // namespace themegrain
