#include "prospector/engine.hpp"

#include "prospector/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace prospector {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

// Lowest index attaining the extremum; `better(a, b)` is true when a beats b.
template <typename Better>
std::pair<int, bool> select_link(std::span<const double> values, Better better) {
  if (values.empty()) throw EmptyEvidence("no evidence probabilities to combine");
  require_probability(values[0], "new evidence probability");
  int best = 0;
  bool tie = false;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    require_probability(values[i], "new evidence probability");
    if (better(values[i], values[best])) {
      best = i;
      tie = false;
    } else if (values[i] == values[best]) {
      tie = true;
    }
  }
  return {best, tie};
}

}  // namespace

bool LinkParams::consistent(double tolerance) const {
  return std::abs(p_c - (p_c_given_e * p_e + p_c_given_not_e * (1.0 - p_e))) <= tolerance;
}

std::string_view to_string(RuleSet rule) {
  switch (rule) {
    case RuleSet::Conjunctive: return "conjunctive";
    case RuleSet::Disjunctive: return "disjunctive";
    case RuleSet::Independent: return "independent";
  }
  return "independent";
}

RuleSet parse_rule_set(std::string_view text) {
  if (text == "conjunctive" || text == "and") return RuleSet::Conjunctive;
  if (text == "disjunctive" || text == "or") return RuleSet::Disjunctive;
  if (text == "independent") return RuleSet::Independent;
  throw InvalidArgument("unknown rule set '" + std::string(text) + "'");
}

double clamp_for_odds(double probability) {
  return std::clamp(probability, kOddsClamp, 1.0 - kOddsClamp);
}

double to_odds(double probability) {
  const double p = clamp_for_odds(probability);
  return p / (1.0 - p);
}

double from_odds(double odds) { return odds / (1.0 + odds); }

bool InferenceTrace::any_clamped() const {
  return prior_clamped || std::any_of(evidence.begin(), evidence.end(),
                                      [](const EvidenceTrace& e) { return e.clamped; });
}

double propagate(const LinkParams& link, double p_new_e) {
  require_probability(p_new_e, "new evidence probability");
  if (!(link.p_e > 0.0 && link.p_e < 1.0)) {
    throw DegenerateBaseRate("link base rate must lie in (0, 1), got " + std::to_string(link.p_e));
  }
  double value;
  if (p_new_e == link.p_e) {
    value = link.p_c;
  } else if (p_new_e < link.p_e) {
    const double t = p_new_e / link.p_e;
    value = (1.0 - t) * link.p_c_given_not_e + t * link.p_c;
  } else {
    const double t = (p_new_e - link.p_e) / (1.0 - link.p_e);
    value = (1.0 - t) * link.p_c + t * link.p_c_given_e;
  }
  return std::clamp(value, 0.0, 1.0);
}

double combine_and(std::span<const double> new_evidence) {
  const auto [index, tie] = select_link(new_evidence, std::less<>{});
  return new_evidence[index];
}

double combine_or(std::span<const double> new_evidence) {
  const auto [index, tie] = select_link(new_evidence, std::greater<>{});
  return new_evidence[index];
}

Inference combine_independent(std::span<const double> posteriors, double p_c) {
  if (posteriors.empty()) throw EmptyEvidence("no posteriors to combine");
  if (!(p_c > 0.0 && p_c < 1.0)) {
    throw InvalidArgument("conclusion prior must lie in (0, 1), got " + std::to_string(p_c));
  }

  InferenceTrace trace;
  trace.rule = RuleSet::Independent;
  trace.prior_clamped = clamp_for_odds(p_c) != p_c;
  trace.prior_odds = to_odds(p_c);

  double combined = trace.prior_odds;
  bool all_neutral = true;
  for (double posterior : posteriors) {
    require_probability(posterior, "posterior");
    EvidenceTrace step;
    step.new_probability = posterior;
    step.posterior = posterior;
    step.clamped = clamp_for_odds(posterior) != posterior;
    step.odds = to_odds(posterior);
    step.likelihood_ratio = step.odds / trace.prior_odds;
    all_neutral = all_neutral && step.likelihood_ratio == 1.0;
    combined *= step.likelihood_ratio;
    trace.evidence.push_back(step);
  }
  trace.combined_odds = combined;
  // Unit likelihood ratios leave the prior untouched; skip the odds round trip.
  trace.probability = all_neutral ? p_c : from_odds(combined);
  return Inference{trace.probability, std::move(trace)};
}

Inference infer(std::span<const LinkParams> links, RuleSet rule, std::span<const double> new_evidence) {
  if (links.empty() || new_evidence.empty()) throw EmptyEvidence("inference needs at least one link");
  if (links.size() != new_evidence.size()) {
    throw InvalidArgument("one new evidence probability is required per link");
  }

  const bool inconsistent =
      std::any_of(links.begin(), links.end(), [](const LinkParams& l) { return !l.consistent(); });

  std::vector<double> posteriors;
  posteriors.reserve(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    posteriors.push_back(propagate(links[i], new_evidence[i]));
  }

  if (rule == RuleSet::Independent) {
    auto result = combine_independent(posteriors, links.front().p_c);
    for (std::size_t i = 0; i < links.size(); ++i) {
      result.trace.evidence[i].new_probability = new_evidence[i];
    }
    result.trace.inconsistent_link = inconsistent;
    return result;
  }

  const auto [selected, tie] = rule == RuleSet::Conjunctive
                                   ? select_link(new_evidence, std::less<>{})
                                   : select_link(new_evidence, std::greater<>{});

  InferenceTrace trace;
  trace.rule = rule;
  trace.selected_link = selected;
  trace.tie = tie;
  trace.inconsistent_link = inconsistent;
  trace.prior_clamped = clamp_for_odds(links.front().p_c) != links.front().p_c;
  trace.prior_odds = to_odds(links.front().p_c);
  for (std::size_t i = 0; i < links.size(); ++i) {
    EvidenceTrace step;
    step.new_probability = new_evidence[i];
    step.posterior = posteriors[i];
    step.clamped = clamp_for_odds(posteriors[i]) != posteriors[i];
    step.odds = to_odds(posteriors[i]);
    step.likelihood_ratio = step.odds / trace.prior_odds;
    trace.evidence.push_back(step);
  }
  trace.probability = posteriors[selected];
  trace.combined_odds = trace.evidence[selected].odds;
  return Inference{trace.probability, std::move(trace)};
}

Inference infer(const NetworkView& view, RuleSet rule, const EvidenceUpdate& update) {
  const auto links = view.links();
  const std::array<double, 2> probs = {update.p_new_e1, update.p_new_e2};
  return infer(links, rule, probs);
}

}  // namespace prospector
