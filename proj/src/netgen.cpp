#include "prospector/netgen.hpp"

#include "prospector/errors.hpp"
#include "prospector/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>

namespace prospector {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Event slice(Variable v, bool state) {
  switch (v) {
    case Variable::E1: return Event{.e1 = state};
    case Variable::E2: return Event{.e2 = state};
    case Variable::C: return Event{.c = state};
  }
  return Event{};
}

double target_of(const MarginTargets& t, Variable v) {
  switch (v) {
    case Variable::E1: return t.e1;
    case Variable::E2: return t.e2;
    case Variable::C: return t.c;
  }
  return 0.0;
}

}  // namespace

unsigned default_worker_count() {
  if (const char* env = std::getenv("PROSPECTOR_WORKERS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value > 0) return static_cast<unsigned>(value);
  }
  return 1;
}

void GenerationConfig::validate() const {
  if (count == 0) throw InvalidArgument("network count must be positive");
  if (!(base_rate_guard > 0.0 && base_rate_guard < 0.5)) {
    throw InvalidArgument("base-rate guard must lie in (0, 0.5)");
  }
  if (!(ipf_tolerance > 0.0)) throw InvalidArgument("IPF tolerance must be positive");
  if (ipf_iteration_cap <= 0) throw InvalidArgument("IPF iteration cap must be positive");
  if (max_attempts <= 0) throw InvalidArgument("attempt limit must be positive");
  if (kind == EvidenceRelation::Unspecified) {
    throw InvalidArgument("generation kind must be independent or associated");
  }
}

double margin_deviation(const JointTable& table, const MarginTargets& targets) {
  const auto rates = base_rates(table);
  return std::max({std::abs(rates.p_e1 - targets.e1), std::abs(rates.p_e2 - targets.e2),
                   std::abs(rates.p_c - targets.c)});
}

JointTable ipf_fit(const JointTable& table, const MarginTargets& targets, double tolerance,
                   int iteration_cap, const std::array<Variable, 3>& order) {
  if (!(table.cells() > 0.0).all()) throw InvalidArgument("IPF requires strictly positive cells");
  for (double t : {targets.e1, targets.e2, targets.c}) {
    if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("IPF targets must lie in (0, 1)");
  }

  Cells cells = table.cells();
  const auto deviation = [&] { return margin_deviation(table.with_cells(cells), targets); };

  double dev = deviation();
  int sweeps = 0;
  while (dev > tolerance || std::abs(cells.sum() - 1.0) > kNormalizationTolerance) {
    if (sweeps == iteration_cap) {
      std::ostringstream msg;
      msg << "IPF did not converge after " << sweeps << " sweeps (deviation " << dev << ")";
      throw NoConvergence(msg.str(), dev, sweeps);
    }
    for (Variable v : order) {
      const Cells on = slice(v, true).indicator();
      const Cells off = slice(v, false).indicator();
      const double target = target_of(targets, v);
      const double mass_on = (cells * on).sum();
      const double mass_off = (cells * off).sum();
      cells *= on * (target / mass_on) + off * ((1.0 - target) / mass_off);
    }
    ++sweeps;
    dev = deviation();
  }
  return table.with_cells(cells);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index, std::uint32_t attempt) {
  return splitmix64(splitmix64(splitmix64(seed) ^ index) ^ attempt);
}

NetworkRng::NetworkRng(std::uint64_t seed, std::uint64_t index, std::uint32_t attempt)
    : engine_(derive_stream_seed(seed, index, attempt)) {}

double NetworkRng::uniform(double lo, double hi) {
  // 53-bit mantissa draw; std::uniform_real_distribution is not portable bit-for-bit.
  double u = 0.0;
  while (u == 0.0) u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

JointTable independent_table(double p_e1, double p_e2, const std::array<double, 4>& c_true_share) {
  EvidencePairMarginals m{};
  for (int pair = 0; pair < 4; ++pair) {
    const double w1 = (pair >> 1) ? p_e1 : 1.0 - p_e1;
    const double w2 = (pair & 1) ? p_e2 : 1.0 - p_e2;
    m[pair] = w1 * w2;
  }
  const ConditionalProfile profile{c_true_share[0], c_true_share[1], c_true_share[2], c_true_share[3]};
  return JointTable(assemble_cells(m, profile), EvidenceRelation::Independent);
}

std::vector<JointTable> generate_associated(const GenerationConfig& config) {
  config.validate();
  const double lo = config.base_rate_guard;
  const double hi = 1.0 - config.base_rate_guard;

  std::vector<std::optional<JointTable>> slots(config.count);
  parallel_for(config.count, config.workers, [&](std::size_t index) {
    double last_deviation = 0.0;
    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
      NetworkRng rng(config.seed, index, static_cast<std::uint32_t>(attempt));
      MarginTargets targets;
      targets.e1 = rng.uniform(lo, hi);
      targets.e2 = rng.uniform(lo, hi);
      targets.c = rng.uniform(lo, hi);
      Cells raw;
      for (int i = 0; i < 8; ++i) raw[i] = rng.uniform();
      raw /= raw.sum();
      const Provenance provenance{config.seed, index, static_cast<std::uint32_t>(attempt)};
      try {
        slots[index] = ipf_fit(JointTable(raw, EvidenceRelation::Associated, provenance), targets,
                               config.ipf_tolerance, config.ipf_iteration_cap);
        return;
      } catch (const NoConvergence& e) {
        last_deviation = e.deviation();
      }
    }
    std::ostringstream msg;
    msg << "network " << index << " (seed " << config.seed << ") failed IPF after "
        << config.max_attempts << " attempts; last deviation " << last_deviation;
    throw NoConvergence(msg.str(), last_deviation, config.ipf_iteration_cap);
  });

  std::vector<JointTable> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

std::vector<JointTable> generate_independent(const GenerationConfig& config) {
  config.validate();
  const double lo = config.base_rate_guard;
  const double hi = 1.0 - config.base_rate_guard;

  std::vector<JointTable> out(config.count);
  parallel_for(config.count, config.workers, [&](std::size_t index) {
    NetworkRng rng(config.seed, index);
    const double p_e1 = rng.uniform(lo, hi);
    const double p_e2 = rng.uniform(lo, hi);
    std::array<double, 4> share{};
    for (double& u : share) u = rng.uniform();
    const auto table = independent_table(p_e1, p_e2, share);
    out[index] = JointTable(table.cells(), EvidenceRelation::Independent,
                            Provenance{config.seed, index, 0});
  });
  return out;
}

std::vector<JointTable> generate(const GenerationConfig& config) {
  return config.kind == EvidenceRelation::Independent ? generate_independent(config)
                                                      : generate_associated(config);
}

}  // namespace prospector
