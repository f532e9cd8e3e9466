#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/errors.hpp"
#include "sumlab/lacunary.hpp"
#include "sumlab/modulus.hpp"

namespace sumlab {

enum class PhiMode { global, lacunary };

struct PhiEstimate {
  double epsilon = 0.0;
  double value = 0.0;
  std::vector<std::pair<double, double>> trajectory;  // (scale, ratio)
  bool plateau = false;
  PhiMode mode = PhiMode::global;
  std::string theta_name;
  double max_scale = 0.0;
};

namespace detail {

// The ratio limit lives at n -> infinity; for moduli with log-speed growth it
// is invisible below astronomically large arguments, so the scan walks real
// arguments geometrically and treats the horizon's decade count as its depth
// budget. For an unbounded modulus the limsup over real arguments equals the
// limsup over integers (bracket n <= x < n+1 and use subadditivity).
inline double phi_scan_depth(std::uint64_t horizon) {
  const double decades = 12.0 * std::log10(static_cast<double>(horizon));
  return std::pow(10.0, std::min(decades, 250.0));
}

inline PhiEstimate phi_from_scales(const Modulus& m, double eps,
                                   const std::vector<double>& scales) {
  PhiEstimate est;
  est.epsilon = eps;
  est.trajectory.reserve(scales.size());
  for (double x : scales) {
    const double fx = m(x);
    const double fxe = m(x * eps);
    if (!(fx > 0.0)) continue;
    const double ratio = fxe / fx;
    if (!std::isfinite(ratio)) break;
    est.trajectory.emplace_back(x, ratio);
  }
  if (est.trajectory.empty()) return est;
  const double top = est.trajectory.back().first;
  est.max_scale = top;
  double tail_max = 0.0;       // scales in (top/2, top]
  double prev_decade = 0.0;    // scales in (top/20, top/10]
  bool have_prev = false;
  for (const auto& [x, r] : est.trajectory) {
    if (x > top / 2.0) tail_max = std::max(tail_max, r);
    if (x > top / 20.0 && x <= top / 10.0) {
      prev_decade = std::max(prev_decade, r);
      have_prev = true;
    }
  }
  if (!have_prev) {
    // Sparse block grids can jump past the comparison decade entirely; fall
    // back to the last sample below the tail window.
    for (const auto& [x, r] : est.trajectory) {
      if (x > top / 2.0) break;
      prev_decade = r;
      have_prev = true;
    }
  }
  est.value = tail_max;
  est.plateau =
      have_prev && std::abs(tail_max - prev_decade) <= 1e-3 * std::max(tail_max, 1e-12);
  return est;
}

}  // namespace detail

// Tail-max surrogate for limsup f(n*eps)/f(n); with a theta the scan runs over
// the block lengths h_t instead.
inline PhiEstimate phi_estimate(const Modulus& m, double eps, std::uint64_t horizon,
                                const LacunaryTheta* theta = nullptr) {
  if (horizon < 100) throw Error(Errc::invalid_horizon, "phi scans need horizon >= 100");
  if (!(eps > 0.0)) throw Error(Errc::invalid_params, "epsilon must be positive");
  const double depth = detail::phi_scan_depth(horizon);
  std::vector<double> scales;
  if (theta == nullptr) {
    const double step = std::pow(10.0, 1.0 / 8.0);
    for (double x = 1.0; x <= depth; x *= step) scales.push_back(x);
  } else {
    scales = theta->scan_lengths(depth);
  }
  PhiEstimate est = detail::phi_from_scales(m, eps, scales);
  est.mode = theta ? PhiMode::lacunary : PhiMode::global;
  if (theta) est.theta_name = theta->name();
  return est;
}

struct ClassifyResult {
  Compatibility verdict = Compatibility::unknown;
  Compatibility declared = Compatibility::unknown;
  bool conflict = false;
  std::vector<PhiEstimate> estimates;
};

inline const std::vector<double>& default_eps_grid() {
  static const std::vector<double> grid = {0.1, 0.01, 0.001, 0.0001};
  return grid;
}

// Compatible: estimates settle and sink below 0.05 along the grid.
// Incompatible: estimates settle while staying at 0.5 or above.
// Anything between is surfaced as Unknown rather than forced to a side.
inline ClassifyResult classify_compatibility(const Modulus& m, const std::vector<double>& eps_grid,
                                             std::uint64_t horizon,
                                             const LacunaryTheta* theta = nullptr) {
  if (eps_grid.size() < 4) throw Error(Errc::grid_too_coarse, "need at least 4 epsilon values");
  for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
    if (!(eps_grid[i] > eps_grid[i + 1]))
      throw Error(Errc::grid_too_coarse, "epsilon grid must strictly decrease");

  ClassifyResult res;
  res.declared = m.declared;
  for (double eps : eps_grid) res.estimates.push_back(phi_estimate(m, eps, horizon, theta));

  bool all_plateau = true;
  bool nonincreasing = true;
  double min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < res.estimates.size(); ++i) {
    const auto& e = res.estimates[i];
    all_plateau = all_plateau && e.plateau;
    min_value = std::min(min_value, e.value);
    if (i > 0 && e.value > res.estimates[i - 1].value + 1e-6) nonincreasing = false;
  }
  const double last = res.estimates.back().value;
  if (all_plateau && nonincreasing && last < 0.05) {
    res.verdict = Compatibility::compatible;
  } else if (all_plateau && min_value >= 0.5) {
    res.verdict = Compatibility::incompatible;
  } else {
    res.verdict = Compatibility::unknown;
  }
  res.conflict = res.declared != Compatibility::unknown &&
                 res.verdict != Compatibility::unknown && res.verdict != res.declared;
  return res;
}

}  // namespace sumlab
