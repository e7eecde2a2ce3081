#pragma once

// Builds a joint table from linear probability statements and solves for the
// unique table satisfying them. Used for the built-in case-study networks.

#include "prospector/joint_table.hpp"

#include <span>
#include <vector>

namespace prospector {

/// coefficients . cells == rhs
struct LinearConstraint {
  Cells coefficients = Cells::Zero();
  double rhs = 0.0;
};

LinearConstraint normalization();
/// P(event) == value
LinearConstraint probability_of(const Event& event, double value);
/// P(C | given) == value, written as (1 - value) P(C, given) - value P(~C, given) == 0.
LinearConstraint conclusion_given(const Event& given, double value);

/// Solves the 8x8 system. Throws InvalidArgument unless exactly eight
/// linearly independent constraints are supplied or the solution is not a
/// valid distribution.
JointTable solve_table(std::span<const LinearConstraint> constraints,
                       EvidenceRelation kind = EvidenceRelation::Unspecified);

/// P(C) = P(E1) = P(E2) = .5, independent evidence, conditional profile (.1, .5, .5, .9).
JointTable case_study_one();

/// Low base rates P(E1) = .01, P(E2) = .02, P(C) = .05 with independent evidence,
/// P(C|E1) = .6, P(C|E2) = .7 and P(C|E1,E2) = .95.
JointTable case_study_two();

JointTable case_study(int id);

}  // namespace prospector
