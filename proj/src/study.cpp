#include "prospector/study.hpp"

#include "prospector/errors.hpp"
#include "prospector/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace prospector {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string describe_network(std::size_t id, const JointTable& table) {
  std::ostringstream out;
  out << "network " << id << " (" << to_string(table.kind());
  if (const auto& p = table.provenance()) {
    out << ", seed " << p->seed << ", index " << p->index << ", resamples " << p->resamples;
  }
  out << ")";
  return out.str();
}

std::vector<double> ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> rank(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double average = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = average;
    i = j + 1;
  }
  return rank;
}

}  // namespace

std::string_view to_string(MonotonicityPattern pattern) {
  switch (pattern) {
    case MonotonicityPattern::Pattern1: return "pattern1";
    case MonotonicityPattern::Pattern2: return "pattern2";
    case MonotonicityPattern::Rejected: return "rejected";
  }
  return "rejected";
}

MonotonicityPattern monotonicity_pattern(const ConditionalProfile& q, FilterMode mode) {
  const bool full = mode != FilterMode::Literal;
  const bool nonincreasing =
      q.q_ff >= q.q_ft && q.q_tf >= q.q_tt && (!full || (q.q_ff >= q.q_tf && q.q_ft >= q.q_tt));
  if (nonincreasing) return MonotonicityPattern::Pattern1;
  const bool nondecreasing =
      q.q_ff <= q.q_ft && q.q_tf <= q.q_tt && (!full || (q.q_ff <= q.q_tf && q.q_ft <= q.q_tt));
  if (nondecreasing) return MonotonicityPattern::Pattern2;
  return MonotonicityPattern::Rejected;
}

std::vector<double> default_grid() { return {0.0, 0.2, 0.5, 0.8, 1.0}; }

std::vector<EvidenceUpdate> grid_updates(std::span<const double> grid) {
  std::vector<EvidenceUpdate> updates;
  updates.reserve(grid.size() * grid.size());
  for (double e1 : grid) {
    for (double e2 : grid) updates.push_back({e1, e2});
  }
  return updates;
}

std::vector<EvaluationRecord> evaluate_network(const JointTable& table, std::span<const double> grid,
                                               std::size_t network_id, const OracleOptions& oracle) {
  const NetworkView view = network_view(table);
  std::vector<EvaluationRecord> records;
  records.reserve(grid.size() * grid.size());
  for (const auto& update : grid_updates(grid)) {
    EvaluationRecord record;
    record.network_id = network_id;
    record.update = update;
    try {
      record.oracle = correct_posterior(table, update, oracle);
      for (RuleSet rule : kRuleSets) {
        const int r = rule_index(rule);
        record.prospector[r] = infer(view, rule, update).probability;
        record.signed_error[r] = record.oracle - record.prospector[r];
        record.absolute_error[r] = std::abs(record.signed_error[r]);
      }
    } catch (const Error& e) {
      record.failure = e.what();
      record.oracle = kNaN;
      record.prospector.fill(kNaN);
      record.signed_error.fill(kNaN);
      record.absolute_error.fill(kNaN);
    }
    records.push_back(std::move(record));
  }
  return records;
}

NetworkErrorSummary summarize(std::span<const EvaluationRecord> records) {
  if (records.empty()) throw InvalidArgument("cannot summarize an empty record list");
  NetworkErrorSummary summary;
  summary.network_id = records.front().network_id;
  for (const auto& record : records) {
    if (record.failure) {
      throw InvalidArgument("record for network " + std::to_string(record.network_id) +
                            " failed: " + *record.failure);
    }
    for (int r = 0; r < 3; ++r) {
      auto& stats = summary.by_rule[r];
      stats.average_signed += record.signed_error[r];
      stats.average_absolute += record.absolute_error[r];
      stats.maximum_absolute = std::max(stats.maximum_absolute, record.absolute_error[r]);
    }
  }
  const double n = static_cast<double>(records.size());
  for (auto& stats : summary.by_rule) {
    stats.average_signed /= n;
    stats.average_absolute /= n;
  }

  summary.best = kTieBreakOrder.front();
  for (RuleSet rule : kTieBreakOrder) {
    if (summary.stats(rule).average_absolute < summary.best_stats().average_absolute) {
      summary.best = rule;
    }
  }
  for (RuleSet rule : kRuleSets) {
    if (rule != summary.best &&
        std::abs(summary.stats(rule).average_absolute - summary.best_stats().average_absolute) <=
            kTieTolerance) {
      summary.tie = true;
    }
  }
  return summary;
}

Diagnostics diagnostics(const JointTable& table) {
  const auto q = conditional_profile(table);
  const auto rates = base_rates(table);
  Diagnostics d;

  d.conjunctive_approximation =
      (table(false, false, true) + table(false, true, true) + table(true, false, true)) /
      (1.0 - rates.p_e1 * rates.p_e2);
  d.conjunctive_spread = std::max({q.q_ff, q.q_ft, q.q_tf}) - std::min({q.q_ff, q.q_ft, q.q_tf});
  d.conjunctive_gap = std::abs(q.q_tt - (q.q_ff + q.q_ft + q.q_tf) / 3.0);

  d.disjunctive_approximation =
      (table(false, true, true) + table(true, false, true) + table(true, true, true)) /
      (1.0 - (1.0 - rates.p_e1) * (1.0 - rates.p_e2));
  d.disjunctive_spread = std::max({q.q_ft, q.q_tf, q.q_tt}) - std::min({q.q_ft, q.q_tf, q.q_tt});
  d.disjunctive_gap = std::abs(q.q_ff - (q.q_ft + q.q_tf + q.q_tt) / 3.0);

  d.associative_strength = std::abs(q.q_tf - q.q_tt);
  return d;
}

StudyConfig StudyConfig::from_seed(std::uint64_t seed, std::size_t count_per_class) {
  StudyConfig config;
  config.independent.seed = seed;
  config.independent.count = count_per_class;
  config.associated.seed = seed + 1;
  config.associated.count = count_per_class;
  return config;
}

void StudyConfig::validate() const {
  independent.validate();
  associated.validate();
  if (independent.kind != EvidenceRelation::Independent ||
      associated.kind != EvidenceRelation::Associated) {
    throw InvalidArgument("study samples must be one independent and one associated");
  }
  if (evaluation.grid.empty()) throw InvalidArgument("evidence grid is empty");
  for (double g : evaluation.grid) {
    if (!(g >= 0.0 && g <= 1.0)) throw InvalidArgument("grid values must lie in [0, 1]");
  }
}

const ClassSummary* StudyReport::find_class(EvidenceRelation kind) const {
  for (const auto& c : classes) {
    if (c.kind == kind) return &c;
  }
  return nullptr;
}

StudyReport evaluate_networks(std::span<const JointTable> networks, const EvaluationOptions& options) {
  if (options.grid.empty()) throw InvalidArgument("evidence grid is empty");

  std::vector<NetworkResult> results(networks.size());
  std::vector<std::vector<EvaluationRecord>> records(networks.size());

  parallel_for(networks.size(), options.workers, [&](std::size_t id) {
    const JointTable& table = networks[id];
    NetworkResult& result = results[id];
    result.id = id;
    result.kind = table.kind();
    result.provenance = table.provenance();
    try {
      require_valid(table);
      result.pattern = monotonicity_pattern(conditional_profile(table), options.filter);
      result.diagnostics = diagnostics(table);
      result.included = options.filter == FilterMode::Off || result.pattern != MonotonicityPattern::Rejected;
      if (!result.included) return;
      records[id] = evaluate_network(table, options.grid, id, options.oracle);
      for (const auto& record : records[id]) {
        if (record.failure) {
          std::ostringstream msg;
          msg << "at update (" << record.update.p_new_e1 << ", " << record.update.p_new_e2
              << "): " << *record.failure;
          throw Error(msg.str());
        }
      }
      result.summary = summarize(records[id]);
    } catch (const Error& e) {
      throw Error(describe_network(id, table) + ": " + e.what());
    }
  });

  StudyReport report;
  report.grid = options.grid;
  report.filter = options.filter;
  for (EvidenceRelation kind :
       {EvidenceRelation::Independent, EvidenceRelation::Associated, EvidenceRelation::Unspecified}) {
    ClassSummary summary;
    summary.kind = kind;
    for (const auto& result : results) {
      if (result.kind != kind) continue;
      ++summary.generated;
      if (!result.included) continue;
      ++summary.filtered_in;
      ++summary.best_counts[rule_index(result.summary->best)];
      summary.overall_average_error += result.summary->best_stats().average_absolute;
      summary.overall_maximum_error += result.summary->best_stats().maximum_absolute;
    }
    if (summary.generated == 0) continue;
    if (summary.filtered_in > 0) {
      summary.overall_average_error /= static_cast<double>(summary.filtered_in);
      summary.overall_maximum_error /= static_cast<double>(summary.filtered_in);
    }
    report.classes.push_back(summary);
  }

  for (std::size_t id = 0; id < results.size(); ++id) {
    if (!results[id].included) continue;
    report.strength_error.push_back({id, results[id].diagnostics.associative_strength,
                                     results[id].summary->best_stats().average_absolute});
    std::move(records[id].begin(), records[id].end(), std::back_inserter(report.records));
  }
  report.networks = std::move(results);
  return report;
}

StudyReport run_study(const StudyConfig& config) {
  config.validate();
  auto independent = config.independent;
  auto associated = config.associated;
  independent.workers = associated.workers = config.evaluation.workers;

  std::vector<JointTable> networks = generate(independent);
  auto more = generate(associated);
  networks.insert(networks.end(), more.begin(), more.end());
  return evaluate_networks(networks, config.evaluation);
}

std::vector<double> lattice(double step) {
  if (!(step > 0.0 && step <= 0.5)) throw InvalidArgument("lattice step must lie in (0, 0.5]");
  std::vector<double> points;
  const double n = std::round(1.0 / step);
  if (std::abs(n * step - 1.0) <= 1e-9) {
    for (int i = 0; i <= static_cast<int>(n); ++i) points.push_back(i / n);
    return points;
  }
  for (int i = 0; i * step < 1.0 - 1e-12; ++i) points.push_back(i * step);
  points.push_back(1.0);
  return points;
}

std::vector<SurfacePoint> error_surface(const JointTable& table, RuleSet rule, double step,
                                        const OracleOptions& oracle) {
  const auto points = lattice(step);
  const NetworkView view = network_view(table);
  std::vector<SurfacePoint> surface;
  surface.reserve(points.size() * points.size());
  for (const auto& update : grid_updates(points)) {
    const double correct = correct_posterior(table, update, oracle);
    const double estimate = infer(view, rule, update).probability;
    surface.push_back({update.p_new_e1, update.p_new_e2, correct - estimate});
  }
  return surface;
}

RuleErrorStats rule_error_stats(const JointTable& table, RuleSet rule,
                                std::span<const EvidenceUpdate> updates, const OracleOptions& oracle) {
  if (updates.empty()) throw InvalidArgument("no updates to evaluate");
  const NetworkView view = network_view(table);
  RuleErrorStats stats;
  for (const auto& update : updates) {
    const double error = correct_posterior(table, update, oracle) - infer(view, rule, update).probability;
    stats.average_signed += error;
    stats.average_absolute += std::abs(error);
    stats.maximum_absolute = std::max(stats.maximum_absolute, std::abs(error));
  }
  stats.average_signed /= static_cast<double>(updates.size());
  stats.average_absolute /= static_cast<double>(updates.size());
  return stats;
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("rank correlation needs two equal-length samples of size >= 2");
  }
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace prospector
