#pragma once

// Experimental harness: monotonicity filtering, grid evaluation against the
// cross-entropy oracle, per-network error summaries, diagnostics and the
// rule-set comparison table.

#include "prospector/engine.hpp"
#include "prospector/entropy_oracle.hpp"
#include "prospector/joint_table.hpp"
#include "prospector/netgen.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prospector {

enum class MonotonicityPattern {
  Pattern1,  // conclusion probability nonincreasing in each piece of evidence
  Pattern2,  // nondecreasing in each piece of evidence
  Rejected,
};

std::string_view to_string(MonotonicityPattern pattern);

enum class FilterMode {
  /// Monotone in both E1 and E2 (four comparisons per pattern).
  Full,
  /// Monotone in E2 at both levels of E1 only (two comparisons per pattern).
  Literal,
  /// Every network is evaluated; the pattern is still recorded.
  Off,
};

/// Pattern1 is tested first, so a constant profile classifies as Pattern1.
MonotonicityPattern monotonicity_pattern(const ConditionalProfile& profile,
                                         FilterMode mode = FilterMode::Full);

/// The crossed evidence grid used throughout the study.
std::vector<double> default_grid();
/// All (e1, e2) pairs of the crossed grid, e1 slowest.
std::vector<EvidenceUpdate> grid_updates(std::span<const double> grid);

struct EvaluationRecord {
  std::size_t network_id = 0;
  EvidenceUpdate update;
  std::array<double, 3> prospector{};  // indexed by rule_index
  double oracle = 0.0;
  std::array<double, 3> signed_error{};  // correct - prospector
  std::array<double, 3> absolute_error{};
  /// Set when the engine or oracle failed at this update; numbers are then NaN.
  std::optional<std::string> failure;
};

/// One record per grid update. Failures are attached to the affected record.
std::vector<EvaluationRecord> evaluate_network(const JointTable& table, std::span<const double> grid,
                                               std::size_t network_id = 0,
                                               const OracleOptions& oracle = {});

struct RuleErrorStats {
  double average_signed = 0.0;
  double average_absolute = 0.0;
  double maximum_absolute = 0.0;
};

/// Minimal average absolute error wins; ties go to Independent, then
/// Conjunctive, then Disjunctive.
inline constexpr std::array<RuleSet, 3> kTieBreakOrder = {RuleSet::Independent, RuleSet::Conjunctive,
                                                          RuleSet::Disjunctive};
inline constexpr double kTieTolerance = 1e-15;

struct NetworkErrorSummary {
  std::size_t network_id = 0;
  std::array<RuleErrorStats, 3> by_rule{};
  RuleSet best = RuleSet::Independent;
  bool tie = false;

  const RuleErrorStats& stats(RuleSet rule) const { return by_rule[rule_index(rule)]; }
  const RuleErrorStats& best_stats() const { return stats(best); }
};

/// Throws InvalidArgument on an empty list or on failed records.
NetworkErrorSummary summarize(std::span<const EvaluationRecord> records);

struct Diagnostics {
  double conjunctive_approximation = 0.0;
  double conjunctive_spread = 0.0;  // max - min of P(C|~E1~E2), P(C|~E1 E2), P(C|E1~E2)
  double conjunctive_gap = 0.0;     // |P(C|E1 E2) - mean of the other three|
  double disjunctive_approximation = 0.0;
  double disjunctive_spread = 0.0;  // max - min of P(C|~E1 E2), P(C|E1~E2), P(C|E1 E2)
  double disjunctive_gap = 0.0;     // |P(C|~E1~E2) - mean of the other three|
  double associative_strength = 0.0;  // |P(C|E1~E2) - P(C|E1 E2)|
};

Diagnostics diagnostics(const JointTable& table);

struct EvaluationOptions {
  std::vector<double> grid = default_grid();
  FilterMode filter = FilterMode::Full;
  OracleOptions oracle;
  unsigned workers = 1;
};

/// Seed of the shipped study sample.
inline constexpr std::uint64_t kDefaultStudySeed = 1986;

struct StudyConfig {
  GenerationConfig independent{.count = 400, .seed = 0, .kind = EvidenceRelation::Independent};
  GenerationConfig associated{.count = 400, .seed = 0, .kind = EvidenceRelation::Associated};
  EvaluationOptions evaluation;

  /// Both samples from one seed; the associated sample uses a distinct sub-seed.
  static StudyConfig from_seed(std::uint64_t seed, std::size_t count_per_class = 400);
  void validate() const;
};

struct NetworkResult {
  std::size_t id = 0;
  EvidenceRelation kind = EvidenceRelation::Unspecified;
  std::optional<Provenance> provenance;
  MonotonicityPattern pattern = MonotonicityPattern::Rejected;
  bool included = false;
  /// Present for included networks.
  std::optional<NetworkErrorSummary> summary;
  Diagnostics diagnostics;
};

struct ClassSummary {
  EvidenceRelation kind = EvidenceRelation::Unspecified;
  std::size_t generated = 0;
  std::size_t filtered_in = 0;
  std::array<std::size_t, 3> best_counts{};  // indexed by rule_index
  /// Mean over included networks of the best rule's average absolute error.
  double overall_average_error = 0.0;
  /// Mean over included networks of the best rule's maximum absolute error.
  double overall_maximum_error = 0.0;
};

struct StrengthErrorPair {
  std::size_t network_id = 0;
  double strength = 0.0;
  double error = 0.0;
};

struct StudyReport {
  std::vector<double> grid;
  FilterMode filter = FilterMode::Full;
  std::vector<ClassSummary> classes;
  std::vector<NetworkResult> networks;
  std::vector<EvaluationRecord> records;
  std::vector<StrengthErrorPair> strength_error;

  const ClassSummary* find_class(EvidenceRelation kind) const;
};

/// Filters, evaluates and aggregates the given networks; ids are positions in
/// the span. Throws on the first engine/oracle failure, naming the network.
StudyReport evaluate_networks(std::span<const JointTable> networks, const EvaluationOptions& options);

/// Generates both samples and evaluates them; independent networks come first.
StudyReport run_study(const StudyConfig& config);

struct SurfacePoint {
  double p_new_e1 = 0.0;
  double p_new_e2 = 0.0;
  double signed_error = 0.0;
};

/// {0, step, 2 step, ..., 1}. Throws InvalidArgument unless 0 < step <= .5.
std::vector<double> lattice(double step);

/// Signed error (correct - prospector) over the lattice squared, e1 slowest.
std::vector<SurfacePoint> error_surface(const JointTable& table, RuleSet rule, double step,
                                        const OracleOptions& oracle = {});

/// Signed-error statistics over any list of updates for one rule.
RuleErrorStats rule_error_stats(const JointTable& table, RuleSet rule,
                                std::span<const EvidenceUpdate> updates,
                                const OracleOptions& oracle = {});

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace prospector
