#include "prospector/table_constraints.hpp"

#include "prospector/errors.hpp"

#include <Eigen/LU>

#include <string>

namespace prospector {

LinearConstraint normalization() { return {Cells::Ones(), 1.0}; }

LinearConstraint probability_of(const Event& event, double value) {
  return {event.indicator(), value};
}

LinearConstraint conclusion_given(const Event& given, double value) {
  Event with_c = given;
  with_c.c = true;
  Event without_c = given;
  without_c.c = false;
  return {(1.0 - value) * with_c.indicator() - value * without_c.indicator(), 0.0};
}

JointTable solve_table(std::span<const LinearConstraint> constraints, EvidenceRelation kind) {
  if (constraints.size() != 8) {
    throw InvalidArgument("a joint table needs exactly 8 constraints, got " +
                          std::to_string(constraints.size()));
  }
  Eigen::Matrix<double, 8, 8> system;
  Eigen::Matrix<double, 8, 1> rhs;
  for (int row = 0; row < 8; ++row) {
    system.row(row) = constraints[row].coefficients.matrix().transpose();
    rhs[row] = constraints[row].rhs;
  }
  const Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(system);
  if (lu.rank() < 8) {
    throw InvalidArgument("constraints do not determine a unique table (rank " +
                          std::to_string(lu.rank()) + ")");
  }
  Cells cells = lu.solve(rhs).array();
  // Round-off can leave exact-zero cells slightly negative.
  cells = (cells.abs() < 1e-15).select(0.0, cells);
  JointTable table(cells, kind);
  require_valid(table);
  return table;
}

JointTable case_study_one() {
  const LinearConstraint rows[] = {
      normalization(),
      probability_of({.e1 = true}, 0.5),
      probability_of({.e2 = true}, 0.5),
      probability_of({.e1 = true, .e2 = true}, 0.25),
      conclusion_given({.e1 = false, .e2 = false}, 0.10),
      conclusion_given({.e1 = false, .e2 = true}, 0.50),
      conclusion_given({.e1 = true, .e2 = false}, 0.50),
      conclusion_given({.e1 = true, .e2 = true}, 0.90),
  };
  return solve_table(rows, EvidenceRelation::Independent);
}

JointTable case_study_two() {
  constexpr double p_e1 = 0.01;
  constexpr double p_e2 = 0.02;
  const LinearConstraint rows[] = {
      normalization(),
      probability_of({.e1 = true}, p_e1),
      probability_of({.e2 = true}, p_e2),
      probability_of({.e1 = true, .e2 = true}, p_e1 * p_e2),
      probability_of({.c = true}, 0.05),
      conclusion_given({.e1 = true}, 0.60),
      conclusion_given({.e2 = true}, 0.70),
      conclusion_given({.e1 = true, .e2 = true}, 0.95),
  };
  return solve_table(rows, EvidenceRelation::Independent);
}

JointTable case_study(int id) {
  switch (id) {
    case 1: return case_study_one();
    case 2: return case_study_two();
    default: throw InvalidArgument("unknown case study " + std::to_string(id));
  }
}

}  // namespace prospector
