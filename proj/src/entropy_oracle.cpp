#include "prospector/entropy_oracle.hpp"

#include "prospector/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace prospector {

namespace {

struct EvidenceSlices {
  Cells on;
  Cells off;
};

EvidenceSlices slices(int evidence) {
  if (evidence == 0) return {Event{.e1 = true}.indicator(), Event{.e1 = false}.indicator()};
  return {Event{.e2 = true}.indicator(), Event{.e2 = false}.indicator()};
}

std::string describe(int evidence, double target) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "P'(E" << evidence + 1 << ") = " << target;
  return msg.str();
}

// Checks that each slice the target puts mass on has mass to scale.
void require_feasible(const Cells& cells, int evidence, double target) {
  const auto [on, off] = slices(evidence);
  if (target > 0.0 && !((cells * on).sum() > 0.0)) {
    throw Infeasible(describe(evidence, target) + " needs mass where E" +
                     std::to_string(evidence + 1) + " is true, but the table has none");
  }
  if (target < 1.0 && !((cells * off).sum() > 0.0)) {
    throw Infeasible(describe(evidence, target) + " needs mass where E" +
                     std::to_string(evidence + 1) + " is false, but the table has none");
  }
}

void scale_to(Cells& cells, int evidence, double target) {
  const auto [on, off] = slices(evidence);
  const double mass_on = (cells * on).sum();
  const double mass_off = (cells * off).sum();
  const double a = target > 0.0 ? target / mass_on : 0.0;
  const double b = target < 1.0 ? (1.0 - target) / mass_off : 0.0;
  cells *= on * a + off * b;
}

double deviation(const Cells& cells, int evidence, double target) {
  return std::abs((cells * slices(evidence).on).sum() - target);
}

}  // namespace

UpdatedTable mce_update(const JointTable& table, const EvidenceUpdate& update,
                        const OracleOptions& options) {
  const double targets[2] = {update.p_new_e1, update.p_new_e2};
  for (int i = 0; i < 2; ++i) {
    if (!(targets[i] >= 0.0 && targets[i] <= 1.0)) {
      throw InvalidArgument(describe(i, targets[i]) + " is outside [0, 1]");
    }
  }
  if (!(table.cells() >= 0.0).all()) throw InvalidArgument("table has negative cells");

  Cells cells = table.cells();
  const bool boundary[2] = {targets[0] == 0.0 || targets[0] == 1.0,
                            targets[1] == 0.0 || targets[1] == 1.0};

  // Exact conditioning on boundary targets; the slices are separable, so doing
  // these first and scaling the rest afterwards gives the same projection.
  for (int i = 0; i < 2; ++i) {
    if (!boundary[i]) continue;
    require_feasible(cells, i, targets[i]);
    scale_to(cells, i, targets[i]);
  }
  for (int i = 0; i < 2; ++i) {
    if (!boundary[i]) require_feasible(cells, i, targets[i]);
  }

  int iterations = 0;
  const auto worst = [&] {
    return std::max(deviation(cells, 0, targets[0]), deviation(cells, 1, targets[1]));
  };
  while (worst() > options.tolerance) {
    if (iterations == options.iteration_cap) {
      std::ostringstream msg;
      msg << "cross-entropy update did not converge after " << iterations
          << " sweeps (deviation " << worst() << ")";
      throw NoConvergence(msg.str(), worst(), iterations);
    }
    for (int i = 0; i < 2; ++i) {
      if (!boundary[i]) scale_to(cells, i, targets[i]);
    }
    ++iterations;
  }

  UpdatedTable result{table.with_cells(cells), deviation(cells, 0, targets[0]),
                      deviation(cells, 1, targets[1]), iterations};
  return result;
}

double correct_posterior(const JointTable& table, const EvidenceUpdate& update,
                         const OracleOptions& options) {
  return mce_update(table, update, options).table.mass({.c = true});
}

double independent_closed_form(const JointTable& table, const EvidenceUpdate& update) {
  const double dependence = evidence_dependence(table);
  if (dependence > kIndependenceTolerance) {
    std::ostringstream msg;
    msg << "evidence is not independent (|P(e1,e2) - P(e1)P(e2)| = " << dependence << ")";
    throw NotIndependent(msg.str());
  }
  const auto profile = conditional_profile(table);
  double answer = 0.0;
  for (int e1 = 0; e1 < 2; ++e1) {
    for (int e2 = 0; e2 < 2; ++e2) {
      const double w1 = e1 ? update.p_new_e1 : 1.0 - update.p_new_e1;
      const double w2 = e2 ? update.p_new_e2 : 1.0 - update.p_new_e2;
      answer += profile.at(e1, e2) * w1 * w2;
    }
  }
  return answer;
}

}  // namespace prospector
