#pragma once

// Contingency-table representation of a two-evidence / one-conclusion
// inference network and the probabilistic quantities derived from it.
//
// Cells are stored in a fixed-size Eigen array in canonical order
// index = 4*e1 + 2*e2 + c (false = 0, true = 1), i.e. E1 varies slowest and
// the conclusion fastest.

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prospector {

using Cells = Eigen::Array<double, 8, 1>;

enum class EvidenceRelation { Independent, Associated, Unspecified };

std::string_view to_string(EvidenceRelation kind);
EvidenceRelation parse_relation(std::string_view text);

/// Where a generated table came from: the generator seed, its index in the
/// batch and how many times it had to be redrawn.
struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::uint32_t resamples = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

constexpr int cell_index(bool e1, bool e2, bool c) {
  return 4 * static_cast<int>(e1) + 2 * static_cast<int>(e2) + static_cast<int>(c);
}

/// A conjunction of variable states; unset members are marginalized out.
struct Event {
  std::optional<bool> e1;
  std::optional<bool> e2;
  std::optional<bool> c;

  bool contains(int cell) const {
    const bool ce1 = (cell >> 2) & 1;
    const bool ce2 = (cell >> 1) & 1;
    const bool cc = cell & 1;
    return (!e1 || *e1 == ce1) && (!e2 || *e2 == ce2) && (!c || *c == cc);
  }

  /// 0/1 indicator over the eight cells.
  Cells indicator() const {
    Cells mask;
    for (int i = 0; i < 8; ++i) mask[i] = contains(i) ? 1.0 : 0.0;
    return mask;
  }
};

class JointTable {
 public:
  JointTable() : cells_(Cells::Constant(0.125)) {}
  explicit JointTable(const Cells& cells,
                      EvidenceRelation kind = EvidenceRelation::Unspecified,
                      std::optional<Provenance> provenance = std::nullopt)
      : cells_(cells), kind_(kind), provenance_(provenance) {}

  const Cells& cells() const { return cells_; }
  double operator()(bool e1, bool e2, bool c) const { return cells_[cell_index(e1, e2, c)]; }
  double operator[](int index) const { return cells_[index]; }

  EvidenceRelation kind() const { return kind_; }
  const std::optional<Provenance>& provenance() const { return provenance_; }

  JointTable with_kind(EvidenceRelation kind) const { return JointTable(cells_, kind, provenance_); }
  JointTable with_cells(const Cells& cells) const { return JointTable(cells, kind_, provenance_); }

  /// Total probability of an event.
  double mass(const Event& event) const { return (cells_ * event.indicator()).sum(); }

  friend bool operator==(const JointTable& a, const JointTable& b) {
    return (a.cells_ == b.cells_).all() && a.kind_ == b.kind_ && a.provenance_ == b.provenance_;
  }

 private:
  Cells cells_;
  EvidenceRelation kind_ = EvidenceRelation::Unspecified;
  std::optional<Provenance> provenance_;
};

struct BaseRates {
  double p_e1 = 0.0;
  double p_e2 = 0.0;
  double p_c = 0.0;
};

/// P(C | e1, e2) for the four evidence states.
struct ConditionalProfile {
  double q_ff = 0.0;
  double q_ft = 0.0;
  double q_tf = 0.0;
  double q_tt = 0.0;

  double at(bool e1, bool e2) const {
    if (e1) return e2 ? q_tt : q_tf;
    return e2 ? q_ft : q_ff;
  }
};

struct LinkParams;

/// PROSPECTOR's parameterization of a network: the conclusion prior and one
/// evidence->conclusion link per piece of evidence.
struct NetworkView {
  double p_c = 0.0;
  std::array<double, 2> p_e{};
  std::array<double, 2> p_c_given_e{};
  std::array<double, 2> p_c_given_not_e{};

  LinkParams link(int evidence) const;
  std::array<LinkParams, 2> links() const;
};

/// Evidence-state marginals P(e1, e2) in the order ff, ft, tf, tt.
using EvidencePairMarginals = std::array<double, 4>;

BaseRates base_rates(const JointTable& table);
EvidencePairMarginals evidence_pair_marginals(const JointTable& table);

/// Throws ZeroMarginal when any evidence-state pair has probability 0.
ConditionalProfile conditional_profile(const JointTable& table);

/// Throws DegenerateBaseRate when either evidence base rate is 0 or 1.
NetworkView network_view(const JointTable& table);

/// Rebuilds the eight cells from evidence-pair marginals and a conditional
/// profile. Inverse of (evidence_pair_marginals, conditional_profile).
Cells assemble_cells(const EvidencePairMarginals& marginals, const ConditionalProfile& profile);

/// Largest |P(e1, e2) - P(e1) P(e2)| over the four evidence states.
double evidence_dependence(const JointTable& table);

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kIndependenceTolerance = 1e-9;
inline constexpr double kDegenerateMarginal = 1e-9;

struct Violation {
  enum class Kind { NonFinite, Negative, Normalization, Independence, ZeroMarginal };
  Kind kind;
  double value;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind kind) const;
  std::string summary() const;
};

ValidationReport validate(const JointTable& table);

/// Throws InvalidArgument carrying the report summary when validation fails.
void require_valid(const JointTable& table);

}  // namespace prospector
