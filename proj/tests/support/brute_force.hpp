#pragma once

// Test-only reference solvers. Nothing here calls into the scaling code under
// test: the cross-entropy projection is found by a primal Newton method on the
// KKT system of  min sum q log(q/p)  s.t.  A q = b.

#include "prospector/joint_table.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace prospector::testing {

inline double cross_entropy(const Cells& q, const Cells& p) {
  double total = 0.0;
  for (int i = 0; i < 8; ++i) {
    if (q[i] > 0.0) total += q[i] * std::log(q[i] / p[i]);
  }
  return total;
}

/// Constraint matrix rows are cell indicators; rhs the required masses.
struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

inline LinearSystem margin_system(const std::vector<Event>& events, const std::vector<double>& values) {
  LinearSystem s{Eigen::MatrixXd(events.size() + 1, 8), Eigen::VectorXd(events.size() + 1)};
  s.a.row(0).setOnes();
  s.b[0] = 1.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    s.a.row(i + 1) = events[i].indicator().matrix().transpose();
    s.b[i + 1] = values[i];
  }
  return s;
}

/// Newton's method with backtracking from a strictly positive feasible start.
/// Requires all source cells positive.
inline Cells newton_projection(const Cells& source, const LinearSystem& system, Cells start) {
  const int m = static_cast<int>(system.a.rows());
  const auto objective = [&](const Cells& q) { return cross_entropy(q, source); };
  Cells q = start;
  for (int iteration = 0; iteration < 200; ++iteration) {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(8 + m, 8 + m);
    Eigen::VectorXd rhs(8 + m);
    for (int i = 0; i < 8; ++i) {
      kkt(i, i) = 1.0 / q[i];
      rhs[i] = -(std::log(q[i] / source[i]) + 1.0);
    }
    kkt.block(0, 8, 8, m) = system.a.transpose();
    kkt.block(8, 0, m, 8) = system.a;
    rhs.tail(m) = system.b - system.a * q.matrix();
    const Eigen::VectorXd step = kkt.fullPivLu().solve(rhs);
    const Cells dq = step.head(8).array();
    if (dq.abs().maxCoeff() < 1e-15) break;

    double t = 1.0;
    while ((q + t * dq <= 0.0).any()) t *= 0.5;
    const double f0 = objective(q);
    while (t > 1e-20 && objective(q + t * dq) > f0 + 1e-18) t *= 0.5;
    q += t * dq;
  }
  return q;
}

/// Projection of `source` onto P(E1) = x1, P(E2) = x2 for interior targets.
inline Cells brute_force_evidence_update(const Cells& source, double x1, double x2) {
  const auto system = margin_system({Event{.e1 = true}, Event{.e2 = true}}, {x1, x2});
  Cells start;
  for (int i = 0; i < 8; ++i) {
    const double w1 = ((i >> 2) & 1) ? x1 : 1.0 - x1;
    const double w2 = ((i >> 1) & 1) ? x2 : 1.0 - x2;
    start[i] = 0.5 * w1 * w2;
  }
  return newton_projection(source, system, start);
}

/// Projection of `source` onto the three one-dimensional margins.
inline Cells brute_force_margin_fit(const Cells& source, double e1, double e2, double c) {
  const auto system =
      margin_system({Event{.e1 = true}, Event{.e2 = true}, Event{.c = true}}, {e1, e2, c});
  Cells start;
  for (int i = 0; i < 8; ++i) {
    const double w1 = ((i >> 2) & 1) ? e1 : 1.0 - e1;
    const double w2 = ((i >> 1) & 1) ? e2 : 1.0 - e2;
    const double wc = (i & 1) ? c : 1.0 - c;
    start[i] = w1 * w2 * wc;
  }
  return newton_projection(source, system, start);
}

/// Sum over evidence states of P(C|e1,e2) w1(e1) w2(e2), computed directly from cells.
inline double mixture_posterior(const Cells& cells, double x1, double x2) {
  double total = 0.0;
  for (int pair = 0; pair < 4; ++pair) {
    const double marginal = cells[2 * pair] + cells[2 * pair + 1];
    const double w1 = (pair >> 1) ? x1 : 1.0 - x1;
    const double w2 = (pair & 1) ? x2 : 1.0 - x2;
    total += cells[2 * pair + 1] / marginal * w1 * w2;
  }
  return total;
}

}  // namespace prospector::testing
