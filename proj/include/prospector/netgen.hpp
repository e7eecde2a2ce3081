#pragma once

// Random network generation: associated-evidence tables rescaled by
// iterative proportional fitting, and independent-evidence tables built from
// products of evidence base rates.

#include "prospector/joint_table.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace prospector {

struct GenerationConfig {
  std::size_t count = 400;
  std::uint64_t seed = 0;
  EvidenceRelation kind = EvidenceRelation::Associated;
  /// Base rates are drawn from (guard, 1 - guard).
  double base_rate_guard = 1e-3;
  double ipf_tolerance = 1e-10;
  int ipf_iteration_cap = 10000;
  /// Redraws allowed when IPF fails to converge for one network.
  int max_attempts = 10;
  unsigned workers = 1;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

struct MarginTargets {
  double e1 = 0.5;
  double e2 = 0.5;
  double c = 0.5;
};

enum class Variable { E1, E2, C };

/// Default IPF sweep order.
inline constexpr std::array<Variable, 3> kIpfOrder = {Variable::E1, Variable::E2, Variable::C};

/// Rescales the table until its one-dimensional margins match `targets`,
/// adjusting margins in `order` each sweep. Cross-product ratios of the
/// input are preserved. Throws NoConvergence at the iteration cap.
JointTable ipf_fit(const JointTable& table, const MarginTargets& targets, double tolerance = 1e-10,
                   int iteration_cap = 10000, const std::array<Variable, 3>& order = kIpfOrder);

/// Largest |margin - target| over E1, E2, C.
double margin_deviation(const JointTable& table, const MarginTargets& targets);

/// Deterministic random stream for one network, keyed by (seed, index, attempt).
class NetworkRng {
 public:
  NetworkRng(std::uint64_t seed, std::uint64_t index, std::uint32_t attempt = 0);

  /// Uniform on the open interval (lo, hi).
  double uniform(double lo = 0.0, double hi = 1.0);

 private:
  std::mt19937_64 engine_;
};

/// Sub-stream key derived from (seed, index, attempt) with SplitMix64 mixing.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index, std::uint32_t attempt);

/// Independent-evidence table from evidence base rates and the C-true share of
/// each evidence-pair marginal (ff, ft, tf, tt).
JointTable independent_table(double p_e1, double p_e2, const std::array<double, 4>& c_true_share);

std::vector<JointTable> generate_associated(const GenerationConfig& config);
std::vector<JointTable> generate_independent(const GenerationConfig& config);
/// Dispatches on config.kind.
std::vector<JointTable> generate(const GenerationConfig& config);

}  // namespace prospector
