#pragma once

#include "themegrain/core.hpp"
#include "themegrain/operators.hpp"
#include "themegrain/transmission.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace themegrain {

/// Variation stage implementation choice. `auto_select` runs direct
/// summation up to length 8 and the Walsh path beyond; explicit raw tables
/// always run direct summation (they have no Walsh form).
enum class VariationPath { naive, fast, auto_select };

const char* to_string(VariationPath path);

/// Either a structured crossover+mutation kind or an explicit conditional
/// table over the same space.
using Transmission = std::variant<TransmissionSpec, TransmissionTable>;

int transmission_arity(const Transmission& t);
Eigen::Index transmission_space_size(const Transmission& t);

/// A population dynamics: selection under a fixed fitness followed by
/// variation under a fixed transmission, acting on distributions over a
/// fixed genome space.
struct EvolutionMachine {
  GenomeSpace space;
  Transmission transmission;
  FitnessFunction fitness;

  static EvolutionMachine make(GenomeSpace space, Transmission transmission,
                               FitnessFunction fitness);
};

/// The reduced dynamics on theme distributions: theme-level transmission
/// plus a theme fitness.
struct QuotientMachine {
  ThemeSpace space;
  ThemeTransmission transmission;
  FitnessFunction fitness;

  static QuotientMachine make(ThemeSpace space, ThemeTransmission transmission,
                              FitnessFunction fitness);

  Distribution epoch(const Distribution& p) const;
};

/// Raised when quotient construction is asked to verify ambivalence and the
/// check fails; carries the checker's report (witness included).
struct ambivalence_error : std::runtime_error {
  ambivalence_error(std::string message, AmbivalenceReport report_)
      : std::runtime_error(std::move(message)), report(std::move(report_)) {}

  AmbivalenceReport report;
};

/// One generation: variation applied to the selected distribution.
Distribution epoch(const EvolutionMachine& e, const Distribution& p,
                   VariationPath path = VariationPath::auto_select);

struct QuotientOptions {
  bool verify = true;
  AmbivalenceMode mode = AmbivalenceMode::exhaustive;
  std::uint64_t samples = 0;          // sampled mode only
  double tolerance = kAmbivalenceTolerance;
  std::uint64_t seed = 0x7ac5;
};

/// Builds the reduced machine for a partitioning: theme-level transmission
/// derived from e's, plus the supplied theme fitness. With verify on, the
/// transmission must pass the ambivalence check first — otherwise the
/// derived table is garbage — and failure raises ambivalence_error.
QuotientMachine build_quotient(const EvolutionMachine& e,
                               const SchemaPartitioning& beta,
                               FitnessFunction theme_fitness,
                               const QuotientOptions& options = {});

/// [p0, G p0, G^2 p0, ..., G^generations p0].
std::vector<Distribution> run_trajectory(const EvolutionMachine& e,
                                         const Distribution& p0,
                                         int generations,
                                         VariationPath path =
                                             VariationPath::auto_select);

/// Per-generation fidelity record of a lockstep fine/quotient run.
struct FidelityRow {
  int generation = 0;
  /// Manhattan distance between the projected fine state and the quotient
  /// state; 0 at generation 0 by construction.
  double error = 0.0;
  /// Worst |within-class mean fitness - theme fitness| over mass-bearing
  /// themes of the fine state.
  double delta_hat = 0.0;
  /// Worst Manhattan distance between a mass-bearing class conditional of
  /// the fine state and the uniform distribution on that class.
  double uniformity_dev = 0.0;
  /// Same deviation measured between selection and variation; NaN at
  /// generation 0 (no selection has happened yet).
  double uniformity_after_selection = 0.0;
  /// Wall time of this generation's fine+quotient step, milliseconds.
  /// Zero unless timing collection was requested (timings break run-to-run
  /// byte determinism of the CSV).
  double wall_ms = 0.0;
  /// Projected fine state and quotient state, for trajectory dumps.
  Eigen::ArrayXd projected;
  Eigen::ArrayXd quotient;
};

struct FidelityReport {
  std::vector<FidelityRow> rows;

  double max_error() const;
};

struct CompareOptions {
  VariationPath path = VariationPath::auto_select;
  QuotientOptions quotient;
  /// Record wall_ms per generation. Off by default: identical inputs must
  /// produce byte-identical serialized reports.
  bool collect_timings = false;
};

/// Runs E from p0 and the quotient from the projection of p0 in lockstep
/// for `generations` epochs, recording per-generation fidelity.
FidelityReport compare_trajectories(const EvolutionMachine& e,
                                    const SchemaPartitioning& beta,
                                    FitnessFunction theme_fitness,
                                    const Distribution& p0, int generations,
                                    const CompareOptions& options = {});

namespace diagnostics {

/// Class mass below this is treated as zero when maxing over themes.
inline constexpr double kMassFloor = 1e-12;

/// Max over mass-bearing themes of the Manhattan distance between the
/// class conditional of p and the uniform distribution on the class.
double uniformity_deviation(const SchemaPartitioning& beta,
                            const Distribution& p);

/// Max over mass-bearing themes of |class mean fitness - theme fitness|.
double divergence_estimate(const SchemaPartitioning& beta,
                           const FitnessFunction& f,
                           const FitnessFunction& theme_fitness,
                           const Distribution& p);

/// Within the class of theme k, the conditional probability that the bit
/// at `locus` (an undefined locus) is 1. Returns nullopt when the class
/// carries no mass.
std::optional<double> class_bit_marginal(const SchemaPartitioning& beta,
                                         const Distribution& p, Theme k,
                                         int locus);

}  // namespace diagnostics

}  // namespace themegrain
