#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/errors.hpp"

namespace sumlab {

enum class Status { holds, fails, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::holds: return "Holds";
    case Status::fails: return "Fails";
    case Status::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct VerdictPolicy {
  double holds_threshold = 0.02;
  double fails_threshold = 0.2;
  double plateau_tol = 1e-2;

  void validate() const {
    if (!(holds_threshold < fails_threshold))
      throw Error(Errc::invalid_params, "holds threshold must stay below fails threshold");
  }
};

// Finite surrogate for "lim a_n = L0": the trajectory samples partial values
// at increasing checkpoints, the value is the final sample, and the plateau
// flag records agreement with the probes one and two decades back.
struct LimitEstimate {
  std::vector<std::pair<double, double>> trajectory;  // (checkpoint scale, value)
  double value = 0.0;
  bool plateau = false;
  double horizon = 0.0;

  std::optional<double> value_at(double scale) const {
    std::optional<double> out;
    for (const auto& [s, v] : trajectory) {
      if (s <= scale) out = v;
      else break;
    }
    return out;
  }
};

// A probe decade may land mid-oscillation or on an isolated spike while its
// neighbours sit on the settled level, so each probe scans the half-decade
// window around its target and either probe agreeing with the final value
// counts as settled.
inline LimitEstimate finalize_estimate(std::vector<std::pair<double, double>> trajectory,
                                       double horizon, const VerdictPolicy& policy) {
  LimitEstimate est;
  est.trajectory = std::move(trajectory);
  est.horizon = horizon;
  if (est.trajectory.empty()) return est;
  est.value = est.trajectory.back().second;
  const double slack =
      std::max(policy.plateau_tol * std::abs(est.value), policy.plateau_tol);
  auto probe_match = [&](double target) {
    for (const auto& [s, v] : est.trajectory) {
      if (s < target / 2.0) continue;
      if (s > 2.0 * target) break;
      if (std::abs(est.value - v) <= slack) return true;
    }
    return false;
  };
  est.plateau = probe_match(horizon / 10.0) || probe_match(horizon / 100.0);
  return est;
}

// Fraction of final-decade checkpoints sitting above the holds threshold; a
// single quiet endpoint must not certify a trajectory that spends half its
// tail elevated.
inline double tail_exceed_fraction(const LimitEstimate& est, double threshold) {
  std::size_t total = 0, above = 0;
  for (const auto& [s, v] : est.trajectory) {
    if (s > est.horizon / 10.0 && s <= est.horizon) {
      ++total;
      if (v >= threshold) ++above;
    }
  }
  if (total == 0) return 1.0;
  return static_cast<double>(above) / static_cast<double>(total);
}

inline Status classify_estimate(const LimitEstimate& est, const VerdictPolicy& policy) {
  if (est.trajectory.empty()) return Status::inconclusive;
  if (est.value < policy.holds_threshold && est.plateau &&
      tail_exceed_fraction(est, policy.holds_threshold) < 0.5)
    return Status::holds;
  if (est.value >= policy.fails_threshold && est.plateau) return Status::fails;
  return Status::inconclusive;
}

struct EvidenceItem {
  std::string label;
  LimitEstimate estimate;
  Status status = Status::inconclusive;
};

struct Verdict {
  Status status = Status::inconclusive;
  std::vector<EvidenceItem> evidence;

  bool certified() const { return status != Status::inconclusive; }
};

// Holds needs every component settled below threshold; a single certified
// divergence fails the whole statement.
inline Verdict aggregate_verdict(std::vector<EvidenceItem> items) {
  Verdict v;
  v.evidence = std::move(items);
  bool all_hold = !v.evidence.empty();
  bool any_fail = false;
  for (const auto& e : v.evidence) {
    if (e.status != Status::holds) all_hold = false;
    if (e.status == Status::fails) any_fail = true;
  }
  v.status = any_fail ? Status::fails : (all_hold ? Status::holds : Status::inconclusive);
  return v;
}

}  // namespace sumlab
