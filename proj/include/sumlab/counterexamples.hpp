#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/errors.hpp"
#include "sumlab/lacunary.hpp"
#include "sumlab/modulus.hpp"
#include "sumlab/phi.hpp"
#include "sumlab/sequences.hpp"

namespace sumlab {

// A constructed sequence together with the block-level data its separation
// claims rest on.
struct WitnessedSequence {
  SequenceSpec seq;
  std::vector<std::size_t> witness_blocks;
  std::vector<double> witness_sizes;   // n_k / block length / range start, per kind
  std::vector<double> eps_seq;         // the eps values actually used
  std::vector<double> witness_ratios;  // modulated block ratio at each witness
  double separation_c = 0.0;           // min witness ratio
  double x0 = 0.0;                     // gap construction amplitude
  std::vector<std::size_t> skipped_eps;
};

inline std::vector<double> eps_inv_k(std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) out.push_back(1.0 / static_cast<double>(k));
  return out;
}

inline std::vector<double> eps_inv_pow2(std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) out.push_back(std::ldexp(1.0, -static_cast<int>(k)));
  return out;
}

namespace detail {

inline void require_decreasing_eps(const std::vector<double>& eps) {
  if (eps.empty()) throw Error(Errc::invalid_params, "eps sequence is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw Error(Errc::invalid_params, "eps values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1]))
      throw Error(Errc::invalid_params, "eps sequence must strictly decrease");
  }
}

inline void require_not_theta_compatible(const Modulus& f, const LacunaryTheta& theta) {
  const auto cls = classify_compatibility(f, default_eps_grid(), 10000000ull, &theta);
  if (cls.verdict == Compatibility::compatible)
    throw Error(Errc::compatible_modulus,
                f.name + " is theta-compatible on " + theta.name() +
                    "; the construction needs a failing phi_theta limit");
}

// First block past `from` whose length carries the f-ratio above the target.
// require_room additionally demands h(1-eps) - 1 > 0.
inline std::size_t find_witness_block(const Modulus& f, const LacunaryTheta& theta, double eps,
                                      double c_target, std::size_t from, bool require_room) {
  const std::size_t max_block = 4096;
  for (std::size_t r = from; r <= max_block; ++r) {
    double h, kr;
    try {
      h = theta.h(r);
      kr = theta.k(r);
    } catch (const Error&) {
      break;
    }
    if (kr > 4.5e15) break;  // keep supports in exact-integer range
    if (require_room && !(h * (1.0 - eps) - 1.0 > 0.0)) continue;
    if (f(h * eps) >= c_target * f(h)) return r;
  }
  return 0;
}

struct Interval {
  std::uint64_t lo, hi;  // inclusive
  double value;
};

inline SequenceSpec interval_sequence(std::string name, std::vector<Interval> ivals) {
  std::sort(ivals.begin(), ivals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return {std::move(name), 0.0,
          [ivals = std::move(ivals)](std::uint64_t n) {
            auto it = std::upper_bound(
                ivals.begin(), ivals.end(), n,
                [](std::uint64_t x, const Interval& iv) { return x < iv.lo; });
            if (it == ivals.begin()) return 0.0;
            --it;
            return (n <= it->hi) ? it->value : 0.0;
          },
          {}};
}

}  // namespace detail

// Indicator of A = union over witnesses of [k_{r_k} - n_k, k_{r_k}], with
// n_k = floor(h_{r_k} eps_k) + 1. Block densities n_k/h_{r_k} vanish along the
// witnesses while the f-modulated ratios stay pinned near the phi_theta level.
inline WitnessedSequence build_reciproco_sequence(const Modulus& f, const LacunaryTheta& theta,
                                                  const std::vector<double>& eps_seq,
                                                  std::size_t K,
                                                  std::string name = "reciproco") {
  if (K < 3) throw Error(Errc::invalid_params, "need at least 3 witnesses");
  detail::require_decreasing_eps(eps_seq);
  detail::require_not_theta_compatible(f, theta);

  WitnessedSequence ws;
  std::vector<detail::Interval> ivals;
  std::size_t prev_block = 0;
  for (std::size_t i = 0; i < eps_seq.size() && ws.witness_blocks.size() < K; ++i) {
    const double eps = eps_seq[i];
    if (!(eps < 1.0)) {
      ws.skipped_eps.push_back(i);
      continue;
    }
    const double c_target = 0.9 * phi_estimate(f, eps, 10000000ull, &theta).value;
    const std::size_t r =
        detail::find_witness_block(f, theta, eps, c_target, prev_block + 1, true);
    if (r == 0) {
      ws.skipped_eps.push_back(i);
      continue;
    }
    const double h = theta.h(r);
    const double kr = theta.k(r);
    const double n_k = std::floor(h * eps) + 1.0;
    if (!(h - n_k > 0.0))
      throw Error(Errc::inequality_violated, "witness block leaves no room for its support");
    ws.witness_blocks.push_back(r);
    ws.witness_sizes.push_back(n_k);
    ws.eps_seq.push_back(eps);
    ws.witness_ratios.push_back(f(h * eps) / f(h));
    ivals.push_back({static_cast<std::uint64_t>(kr - n_k), static_cast<std::uint64_t>(kr), 1.0});
    prev_block = r;
  }
  if (ws.witness_blocks.size() < K)
    throw Error(Errc::compatible_modulus,
                "could not place " + std::to_string(K) + " witness blocks for " + f.name +
                    " on " + theta.name());
  ws.separation_c = *std::min_element(ws.witness_ratios.begin(), ws.witness_ratios.end());
  ws.seq = detail::interval_sequence(std::move(name), std::move(ivals));
  ws.seq.hint_blocks = ws.witness_blocks;
  return ws;
}

// x_n = eps_k across the whole witness block I_{r_k}, 0 elsewhere. Bounded by
// eps_1, and the modulated block ratio at witness k equals f(h eps_k)/f(h).
inline WitnessedSequence build_th3_sequence(const Modulus& f, const LacunaryTheta& theta,
                                            const std::vector<double>& eps_seq, std::size_t K,
                                            std::string name = "th3") {
  if (K < 3) throw Error(Errc::invalid_params, "need at least 3 witnesses");
  detail::require_decreasing_eps(eps_seq);
  detail::require_not_theta_compatible(f, theta);

  WitnessedSequence ws;
  std::vector<detail::Interval> ivals;
  std::size_t prev_block = 0;
  for (std::size_t i = 0; i < eps_seq.size() && ws.witness_blocks.size() < K; ++i) {
    const double eps = eps_seq[i];
    const double c_target = 0.9 * phi_estimate(f, eps, 10000000ull, &theta).value;
    const std::size_t r =
        detail::find_witness_block(f, theta, eps, c_target, prev_block + 1, false);
    if (r == 0) {
      ws.skipped_eps.push_back(i);
      continue;
    }
    const double h = theta.h(r);
    ws.witness_blocks.push_back(r);
    ws.witness_sizes.push_back(h);
    ws.eps_seq.push_back(eps);
    ws.witness_ratios.push_back(f(h * eps) / f(h));
    ivals.push_back({static_cast<std::uint64_t>(theta.k(r - 1)) + 1,
                     static_cast<std::uint64_t>(theta.k(r)), eps});
    prev_block = r;
  }
  if (ws.witness_blocks.size() < K)
    throw Error(Errc::compatible_modulus,
                "could not place " + std::to_string(K) + " witness blocks for " + f.name +
                    " on " + theta.name());
  ws.separation_c = *std::min_element(ws.witness_ratios.begin(), ws.witness_ratios.end());
  ws.seq = detail::interval_sequence(std::move(name), std::move(ivals));
  ws.seq.hint_blocks = ws.witness_blocks;
  return ws;
}

// x = x0 on the ranges (k_{s_j}, 2 k_{s_j}), where the block right after k_{s_j}
// has ratio above j. Lacunary block means shrink like 1/(q-1) while prefix
// means keep returning to |x0|/2.
inline WitnessedSequence build_sember_gap_sequence(const LacunaryTheta& theta, double x0,
                                                   std::size_t J,
                                                   std::string name = "sember_gap") {
  if (J < 3) throw Error(Errc::invalid_params, "need at least 3 gap ranges");
  if (x0 == 0.0) throw Error(Errc::invalid_params, "x0 must be nonzero");

  std::size_t profile_blocks = 40;
  if (theta.kind() == ThetaKind::explicit_list)
    profile_blocks = std::min<std::size_t>(profile_blocks, theta.blocks_available());
  const auto prof = theta.ratio_profile(std::max<std::size_t>(10, profile_blocks));
  if (!prof.unbounded_flag)
    throw Error(Errc::bounded_ratios,
                "ratio profile of " + theta.name() + " shows no unbounded growth");

  WitnessedSequence ws;
  ws.x0 = x0;
  std::vector<detail::Interval> ivals;
  std::size_t s = 1;
  for (std::size_t j = 1; j <= J; ++j) {
    bool found = false;
    for (; s <= 4096; ++s) {
      double ks, knext;
      try {
        ks = theta.k(s);
        knext = theta.k(s + 1);
      } catch (const Error&) {
        break;
      }
      if (ks > 2.0e15) break;
      const double q_next = knext / ks;
      if (q_next > static_cast<double>(j) && 2.0 * ks <= knext) {
        ws.witness_blocks.push_back(s + 1);  // block holding the j-th range
        ws.witness_sizes.push_back(ks);
        const auto lo = static_cast<std::uint64_t>(ks) + 1;
        const auto hi = static_cast<std::uint64_t>(2.0 * ks) - 1;
        if (lo <= hi) ivals.push_back({lo, hi, x0});
        ws.witness_ratios.push_back((ks - 1.0) / (knext - ks));
        found = true;
        ++s;
        break;
      }
    }
    if (!found)
      throw Error(Errc::bounded_ratios, "cannot select a block with ratio above " +
                                            std::to_string(j) + " on " + theta.name());
  }
  ws.separation_c = 0.5 * std::abs(x0);
  ws.seq = detail::interval_sequence(std::move(name), std::move(ivals));
  ws.seq.hint_blocks = ws.witness_blocks;
  return ws;
}

}  // namespace sumlab
