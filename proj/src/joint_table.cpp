#include "prospector/joint_table.hpp"

#include "prospector/engine.hpp"
#include "prospector/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace prospector {

std::string_view to_string(EvidenceRelation kind) {
  switch (kind) {
    case EvidenceRelation::Independent: return "independent";
    case EvidenceRelation::Associated: return "associated";
    case EvidenceRelation::Unspecified: return "unspecified";
  }
  return "unspecified";
}

EvidenceRelation parse_relation(std::string_view text) {
  if (text == "independent") return EvidenceRelation::Independent;
  if (text == "associated") return EvidenceRelation::Associated;
  if (text == "unspecified") return EvidenceRelation::Unspecified;
  throw InvalidArgument("unknown evidence relation '" + std::string(text) + "'");
}

LinkParams NetworkView::link(int evidence) const {
  return LinkParams{p_c, p_e.at(evidence), p_c_given_e.at(evidence), p_c_given_not_e.at(evidence)};
}

std::array<LinkParams, 2> NetworkView::links() const { return {link(0), link(1)}; }

BaseRates base_rates(const JointTable& table) {
  return BaseRates{table.mass({.e1 = true}), table.mass({.e2 = true}), table.mass({.c = true})};
}

EvidencePairMarginals evidence_pair_marginals(const JointTable& table) {
  EvidencePairMarginals m{};
  for (int pair = 0; pair < 4; ++pair) {
    m[pair] = table[2 * pair] + table[2 * pair + 1];
  }
  return m;
}

ConditionalProfile conditional_profile(const JointTable& table) {
  const auto m = evidence_pair_marginals(table);
  std::array<double, 4> q{};
  for (int pair = 0; pair < 4; ++pair) {
    if (!(m[pair] > 0.0)) {
      std::ostringstream msg;
      msg << "evidence state (e1=" << (pair >> 1) << ", e2=" << (pair & 1)
          << ") has zero probability";
      throw ZeroMarginal(msg.str());
    }
    q[pair] = table[2 * pair + 1] / m[pair];
  }
  return ConditionalProfile{q[0], q[1], q[2], q[3]};
}

NetworkView network_view(const JointTable& table) {
  NetworkView view;
  view.p_c = table.mass({.c = true});
  for (int i = 0; i < 2; ++i) {
    const Event evidence = i == 0 ? Event{.e1 = true} : Event{.e2 = true};
    const Event absent = i == 0 ? Event{.e1 = false} : Event{.e2 = false};
    const double p_e = table.mass(evidence);
    const double p_not_e = table.mass(absent);
    if (!(p_e > 0.0) || !(p_not_e > 0.0)) {
      throw DegenerateBaseRate("evidence " + std::to_string(i + 1) + " has base rate " +
                               std::to_string(p_e));
    }
    Event with_c = evidence;
    with_c.c = true;
    Event without_e_c = absent;
    without_e_c.c = true;
    view.p_e[i] = p_e;
    view.p_c_given_e[i] = table.mass(with_c) / p_e;
    view.p_c_given_not_e[i] = table.mass(without_e_c) / p_not_e;
  }
  return view;
}

Cells assemble_cells(const EvidencePairMarginals& marginals, const ConditionalProfile& profile) {
  Cells cells;
  for (int pair = 0; pair < 4; ++pair) {
    const double q = profile.at(pair >> 1, pair & 1);
    cells[2 * pair + 1] = q * marginals[pair];
    cells[2 * pair] = (1.0 - q) * marginals[pair];
  }
  return cells;
}

double evidence_dependence(const JointTable& table) {
  const auto rates = base_rates(table);
  const auto m = evidence_pair_marginals(table);
  double worst = 0.0;
  for (int pair = 0; pair < 4; ++pair) {
    const double w1 = (pair >> 1) ? rates.p_e1 : 1.0 - rates.p_e1;
    const double w2 = (pair & 1) ? rates.p_e2 : 1.0 - rates.p_e2;
    worst = std::max(worst, std::abs(m[pair] - w1 * w2));
  }
  return worst;
}

bool ValidationReport::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationReport validate(const JointTable& table) {
  ValidationReport report;
  const Cells& cells = table.cells();

  if (!cells.isFinite().all()) {
    report.violations.push_back({Violation::Kind::NonFinite, 0.0, "table has non-finite cells"});
    return report;
  }

  for (int i = 0; i < 8; ++i) {
    if (cells[i] < 0.0) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "cell " << i << " is negative (" << cells[i] << ")";
      report.violations.push_back({Violation::Kind::Negative, cells[i], msg.str()});
    }
  }

  const double total = cells.sum();
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "cells sum to " << total << " instead of 1";
    report.violations.push_back({Violation::Kind::Normalization, total, msg.str()});
  }

  const auto m = evidence_pair_marginals(table);
  for (int pair = 0; pair < 4; ++pair) {
    if (m[pair] < kDegenerateMarginal) {
      std::ostringstream msg;
      msg << "evidence state (e1=" << (pair >> 1) << ", e2=" << (pair & 1)
          << ") has degenerate probability " << m[pair];
      report.violations.push_back({Violation::Kind::ZeroMarginal, m[pair], msg.str()});
    }
  }

  if (table.kind() == EvidenceRelation::Independent) {
    const double dependence = evidence_dependence(table);
    if (dependence > kIndependenceTolerance) {
      std::ostringstream msg;
      msg << "table is tagged independent but |P(e1,e2) - P(e1)P(e2)| reaches " << dependence;
      report.violations.push_back({Violation::Kind::Independence, dependence, msg.str()});
    }
  }
  return report;
}

void require_valid(const JointTable& table) {
  const auto report = validate(table);
  if (!report.ok()) throw InvalidArgument("invalid joint table: " + report.summary());
}

}  // namespace prospector
