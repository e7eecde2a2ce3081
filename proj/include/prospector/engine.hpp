#pragma once

// PROSPECTOR belief propagation and its three evidence-combination rules.

#include "prospector/evidence_update.hpp"
#include "prospector/joint_table.hpp"

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace prospector {

/// One evidence -> conclusion link.
struct LinkParams {
  double p_c = 0.0;
  double p_e = 0.0;
  double p_c_given_e = 0.0;
  double p_c_given_not_e = 0.0;

  /// Law of total probability: p_c == p_c_given_e p_e + p_c_given_not_e (1 - p_e).
  /// Not enforced; expert-entered links are often inconsistent.
  bool consistent(double tolerance = 1e-9) const;
};

enum class RuleSet { Conjunctive, Disjunctive, Independent };

inline constexpr std::array<RuleSet, 3> kRuleSets = {RuleSet::Conjunctive, RuleSet::Disjunctive,
                                                     RuleSet::Independent};

std::string_view to_string(RuleSet rule);
RuleSet parse_rule_set(std::string_view text);
constexpr int rule_index(RuleSet rule) { return static_cast<int>(rule); }

/// Probabilities are clamped to [kOddsClamp, 1 - kOddsClamp] before conversion to odds.
inline constexpr double kOddsClamp = 1e-12;

/// Odds p / (1 - p) of the clamped probability.
double to_odds(double probability);
double from_odds(double odds);
double clamp_for_odds(double probability);

struct EvidenceTrace {
  double new_probability = 0.0;   // P'(E_i)
  double posterior = 0.0;         // P'(C|E_i)
  double odds = 0.0;              // O'(C|E_i)
  double likelihood_ratio = 1.0;  // L'_i = O'(C|E_i) / O(C)
  bool clamped = false;
};

struct InferenceTrace {
  RuleSet rule = RuleSet::Independent;
  std::vector<EvidenceTrace> evidence;
  double prior_odds = 1.0;     // O(C)
  double combined_odds = 1.0;  // O'(C|E)
  double probability = 0.0;    // P'(C|E)
  bool prior_clamped = false;
  /// Link whose propagated value was used by MIN/MAX; -1 for the independence rule.
  int selected_link = -1;
  /// MIN/MAX saw equal new-evidence probabilities and fell back to the lowest index.
  bool tie = false;
  /// Some link violated the law of total probability.
  bool inconsistent_link = false;

  bool any_clamped() const;
};

struct Inference {
  double probability = 0.0;
  InferenceTrace trace;
};

/// Piecewise-linear interpolation through (0, P(C|~E)), (P(E), P(C)), (1, P(C|E)).
double propagate(const LinkParams& link, double p_new_e);

/// MIN over the new evidence probabilities. Throws EmptyEvidence.
double combine_and(std::span<const double> new_evidence);
/// MAX over the new evidence probabilities. Throws EmptyEvidence.
double combine_or(std::span<const double> new_evidence);

/// Odds-likelihood combination of per-link posteriors around the prior p_c.
Inference combine_independent(std::span<const double> posteriors, double p_c);

/// General k-link inference. `links` and `new_evidence` must have equal, nonzero size.
Inference infer(std::span<const LinkParams> links, RuleSet rule, std::span<const double> new_evidence);

Inference infer(const NetworkView& view, RuleSet rule, const EvidenceUpdate& update);

}  // namespace prospector
