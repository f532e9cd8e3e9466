#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/errors.hpp"

namespace sumlab {

// W(x) on [0, inf): inverse of w*e^w. Newton from the seed log(1+x), which
// lies above the root, so the iteration descends monotonically and w*e^w
// never exceeds 1+x (no overflow for x within double range).
inline double lambert_w(double x) {
  if (x < 0.0) throw Error(Errc::negative_input, "lambert_w requires x >= 0");
  if (x == 0.0) return 0.0;
  double w = std::log1p(x);
  const double tol = 1e-12 * std::max(1.0, x);
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double residual = w * ew - x;
    if (std::abs(residual) <= tol) break;
    w -= residual / (ew * (1.0 + w));
  }
  return w;
}

enum class ModulusKind {
  identity,
  power_sum,       // x^p + x^q
  power_plus_log,  // x^p + log(1+x)
  x_plus_ratio,    // x + x/(x+1)
  log1p,           // log(1+x)
  lambert_w,
  custom,
};

enum class Compatibility { compatible, incompatible, unknown };

inline const char* to_string(Compatibility c) {
  switch (c) {
    case Compatibility::compatible: return "Compatible";
    case Compatibility::incompatible: return "Incompatible";
    case Compatibility::unknown: return "Unknown";
  }
  return "Unknown";
}

struct Modulus {
  std::string name;
  ModulusKind kind = ModulusKind::identity;
  double p = 1.0;
  double q = 1.0;
  Compatibility declared = Compatibility::unknown;
  std::function<double(double)> custom_eval;

  double operator()(double x) const;
};

inline void validate_params(const Modulus& m) {
  switch (m.kind) {
    case ModulusKind::power_sum:
      if (!(m.p > 0.0 && m.p <= 1.0) || !(m.q > 0.0 && m.q <= 1.0))
        throw Error(Errc::invalid_params, "power_sum requires p,q in (0,1]");
      break;
    case ModulusKind::power_plus_log:
      if (!(m.p > 0.0 && m.p <= 1.0))
        throw Error(Errc::invalid_params, "power_plus_log requires p in (0,1]");
      break;
    case ModulusKind::custom:
      if (!m.custom_eval) throw Error(Errc::invalid_params, "custom modulus needs an evaluator");
      break;
    default:
      break;
  }
}

inline double eval_modulus(const Modulus& m, double x) {
  if (x < 0.0) throw Error(Errc::negative_input, "modulus arguments are nonnegative");
  validate_params(m);
  switch (m.kind) {
    case ModulusKind::identity: return x;
    case ModulusKind::power_sum: return std::pow(x, m.p) + std::pow(x, m.q);
    case ModulusKind::power_plus_log: return std::pow(x, m.p) + std::log1p(x);
    case ModulusKind::x_plus_ratio: return x + x / (x + 1.0);
    case ModulusKind::log1p: return std::log1p(x);
    case ModulusKind::lambert_w: return lambert_w(x);
    case ModulusKind::custom: return m.custom_eval(x);
  }
  return x;
}

inline double Modulus::operator()(double x) const { return eval_modulus(*this, x); }

inline Modulus make_identity(std::string name = "identity") {
  return Modulus{std::move(name), ModulusKind::identity, 1, 1, Compatibility::compatible, {}};
}
inline Modulus make_power_sum(double p, double q, std::string name = "power_sum") {
  Modulus m{std::move(name), ModulusKind::power_sum, p, q, Compatibility::compatible, {}};
  validate_params(m);
  return m;
}
inline Modulus make_power_plus_log(double p, std::string name = "power_plus_log") {
  Modulus m{std::move(name), ModulusKind::power_plus_log, p, 1, Compatibility::compatible, {}};
  validate_params(m);
  return m;
}
inline Modulus make_x_plus_ratio(std::string name = "x_plus_ratio") {
  return Modulus{std::move(name), ModulusKind::x_plus_ratio, 1, 1, Compatibility::compatible, {}};
}
inline Modulus make_log1p(std::string name = "log1p") {
  return Modulus{std::move(name), ModulusKind::log1p, 1, 1, Compatibility::incompatible, {}};
}
inline Modulus make_lambert_w(std::string name = "lambert_w") {
  return Modulus{std::move(name), ModulusKind::lambert_w, 1, 1, Compatibility::incompatible, {}};
}
inline Modulus make_custom(std::function<double(double)> f, std::string name = "custom") {
  return Modulus{std::move(name), ModulusKind::custom, 1, 1, Compatibility::unknown, std::move(f)};
}

struct AxiomCheck {
  bool pass = true;
  std::string detail;
};

struct AxiomReport {
  AxiomCheck vanishes_only_at_zero;  // f(0)=0 and f(x)>0 for x>0
  AxiomCheck subadditive;
  AxiomCheck increasing;
  AxiomCheck right_continuous_at_zero;
  AxiomCheck unbounded;

  bool all_pass() const {
    return vanishes_only_at_zero.pass && subadditive.pass && increasing.pass &&
           right_continuous_at_zero.pass && unbounded.pass;
  }
};

// Grid checks over [~1e-9, grid_max] (log-spaced) plus deterministic random
// pairs for subadditivity. Failures carry a witness in `detail`.
inline AxiomReport check_modulus_axioms(const Modulus& m, double grid_max,
                                        std::size_t grid_points) {
  if (grid_points < 2) throw Error(Errc::invalid_params, "grid_points must be >= 2");
  if (!(grid_max > 0.0)) throw Error(Errc::invalid_params, "grid_max must be positive");
  AxiomReport rep;

  const double lo = 1e-9;
  std::vector<double> grid(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    grid[i] = lo * std::pow(grid_max / lo, t);
  }

  auto fail = [](AxiomCheck& c, const std::string& why) {
    c.pass = false;
    if (c.detail.empty()) c.detail = why;
  };

  if (m(0.0) != 0.0) fail(rep.vanishes_only_at_zero, "f(0) != 0");
  for (double x : grid) {
    if (!(m(x) > 0.0)) {
      std::ostringstream os;
      os << "f(" << x << ") <= 0";
      fail(rep.vanishes_only_at_zero, os.str());
      break;
    }
  }

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double fx = m(grid[i]);
    const double fy = m(grid[i + 1]);
    if (fx > fy * (1.0 + 1e-14) + 1e-300) {
      std::ostringstream os;
      os << "f(" << grid[i] << ")=" << fx << " > f(" << grid[i + 1] << ")=" << fy;
      fail(rep.increasing, os.str());
      break;
    }
  }

  // Structured pairs (x,x) catch superadditive growth immediately; random
  // pairs cover the rest of the quadrant.
  std::mt19937_64 rng(0x5eedu);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < grid.size(); i += std::max<std::size_t>(1, grid.size() / 64))
    pairs.emplace_back(grid[i], grid[i]);
  for (int i = 0; i < 512; ++i) {
    const double x = lo * std::pow(grid_max / lo, unit(rng));
    const double y = lo * std::pow(grid_max / lo, unit(rng));
    pairs.emplace_back(x, y);
  }
  for (auto [x, y] : pairs) {
    const double lhs = m(x + y);
    const double rhs = m(x) + m(y);
    if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) {
      std::ostringstream os;
      os << "f(" << x << "+" << y << ")=" << lhs << " > " << rhs;
      fail(rep.subadditive, os.str());
      break;
    }
  }

  // f(10^-k) must decay monotonically toward 0.
  double prev = m(0.1);
  double last = prev;
  for (int k = 2; k <= 15; ++k) {
    const double v = m(std::pow(10.0, -k));
    if (v > prev * (1.0 + 1e-12)) {
      fail(rep.right_continuous_at_zero, "f not decaying along 10^-k");
      break;
    }
    prev = v;
    last = v;
  }
  if (rep.right_continuous_at_zero.pass && !(last <= 1e-3 * std::max(1.0, m(1.0)))) {
    std::ostringstream os;
    os << "f(1e-15)=" << last << " does not approach 0";
    fail(rep.right_continuous_at_zero, os.str());
  }

  // f(10^k) must keep climbing; a plateau marks a bounded modulus.
  double prev_up = m(1.0);
  for (int k = 1; k <= 8; ++k) {
    const double v = m(std::pow(10.0, k));
    if (!(v > prev_up)) {
      fail(rep.unbounded, "f(10^k) stopped increasing");
      break;
    }
    prev_up = v;
  }
  if (rep.unbounded.pass && !(m(1e8) >= 1.05 * m(1e4))) {
    fail(rep.unbounded, "f growth flattens over the test grid");
  }

  return rep;
}

}  // namespace sumlab
