#pragma once

// Statistically correct answers: minimum cross-entropy updating of a joint
// table to new evidence marginals, leaving the conclusion unconstrained.

#include "prospector/evidence_update.hpp"
#include "prospector/joint_table.hpp"

namespace prospector {

struct OracleOptions {
  double tolerance = 1e-10;
  int iteration_cap = 10000;
};

struct UpdatedTable {
  JointTable table;
  double deviation_e1 = 0.0;
  double deviation_e2 = 0.0;
  int iterations = 0;
};

/// The table q minimizing sum q log(q/p) subject to q(E1) = P'(E1) and
/// q(E2) = P'(E2). Interior targets are met by alternating proportional
/// scaling of the evidence slices; targets of 0 or 1 condition exactly.
///
/// Throws Infeasible if a target needs mass the source does not have, and
/// NoConvergence at the iteration cap.
UpdatedTable mce_update(const JointTable& table, const EvidenceUpdate& update,
                        const OracleOptions& options = {});

/// P'(C) after mce_update.
double correct_posterior(const JointTable& table, const EvidenceUpdate& update,
                         const OracleOptions& options = {});

/// Closed form for independent evidence: sum over evidence states of
/// P(C | e1, e2) w1(e1) w2(e2) with w_i(true) = P'(E_i).
/// Throws NotIndependent when the evidence is not independent within 1e-9.
double independent_closed_form(const JointTable& table, const EvidenceUpdate& update);

}  // namespace prospector
