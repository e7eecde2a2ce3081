#pragma once

namespace prospector {

/// New evidence probabilities (P'(E1), P'(E2)).
struct EvidenceUpdate {
  double p_new_e1 = 0.0;
  double p_new_e2 = 0.0;

  double operator[](int evidence) const { return evidence == 0 ? p_new_e1 : p_new_e2; }

  friend bool operator==(const EvidenceUpdate&, const EvidenceUpdate&) = default;
};

}  // namespace prospector
