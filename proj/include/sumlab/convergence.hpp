#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/estimate.hpp"
#include "sumlab/kahan.hpp"
#include "sumlab/lacunary.hpp"
#include "sumlab/modulus.hpp"
#include "sumlab/sequences.hpp"

namespace sumlab {

inline constexpr int kEpsGridSize = 21;  // exceedance grid 2^-j, j = 0..20

inline const std::array<double, kEpsGridSize>& eps_grid() {
  static const auto grid = [] {
    std::array<double, kEpsGridSize> g{};
    for (int j = 0; j < kEpsGridSize; ++j) g[j] = std::ldexp(1.0, -j);
    return g;
  }();
  return grid;
}

// Smallest j with 2^-j < v (strict exceedance); kEpsGridSize when v is below
// the whole grid.
inline int first_exceeded_level(double v) {
  if (!(v > 0.0)) return kEpsGridSize;
  int j = static_cast<int>(std::floor(std::log2(1.0 / v))) + 1;
  j = std::clamp(j, 0, kEpsGridSize);
  const auto& g = eps_grid();
  while (j < kEpsGridSize && !(g[j] < v)) ++j;
  while (j > 0 && g[j - 1] < v) --j;
  return j;
}

struct ResidualRow {
  double scale = 0.0;        // k_r in block mode, n in prefix mode
  std::size_t block = 0;     // block index (0 for prefix rows)
  double width = 0.0;        // h_r, or n for prefix rows
  double sum = 0.0;          // block residual sum, or cumulative prefix sum
  std::array<std::uint64_t, kEpsGridSize> counts{};  // exceedance counts per grid level
};

struct ResidualData {
  bool lacunary = false;
  std::string theta_name;
  double horizon = 0.0;
  double limit = 0.0;
  std::vector<ResidualRow> rows;
};

namespace detail {

inline ResidualRow scan_block(const SequenceSpec& seq, double limit, std::size_t r, double k_prev,
                              double k_cur) {
  ResidualRow row;
  row.block = r;
  row.scale = k_cur;
  row.width = k_cur - k_prev;
  CompensatedSum acc;
  std::array<std::uint64_t, kEpsGridSize + 1> hist{};
  const auto lo = static_cast<std::uint64_t>(k_prev) + 1;
  const auto hi = static_cast<std::uint64_t>(k_cur);
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const double v = std::abs(seq(n) - limit);
    if (v != 0.0) {
      acc.add(v);
      ++hist[first_exceeded_level(v)];
    }
  }
  row.sum = acc.value();
  std::uint64_t running = 0;
  for (int j = 0; j < kEpsGridSize; ++j) {
    running += hist[j];
    row.counts[j] = running;
  }
  return row;
}

inline std::vector<std::uint64_t> prefix_checkpoints(std::uint64_t horizon) {
  std::vector<std::uint64_t> cps;
  for (std::uint64_t n = 1; n <= std::min<std::uint64_t>(16, horizon); ++n) cps.push_back(n);
  double x = 16.0;
  while (x < static_cast<double>(horizon)) {
    x = std::max(x + 1.0, x * 1.02);
    cps.push_back(std::min(horizon, static_cast<std::uint64_t>(x)));
  }
  // Exact decade probes keep the plateau comparison phase-aligned.
  if (horizon >= 100) cps.push_back(horizon / 100);
  if (horizon >= 10) cps.push_back(horizon / 10);
  cps.push_back(horizon);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

}  // namespace detail

// One pass over the sequence, collecting per-block (or cumulative prefix)
// residual sums and strict exceedance counts over the dyadic grid. All
// modulus-dependent processing happens on top of these rows, so a single scan
// serves every f.
inline ResidualData residual_block_sums(const SequenceSpec& seq, const LacunaryTheta* theta,
                                        std::uint64_t horizon, int threads = 1) {
  ResidualData data;
  data.horizon = static_cast<double>(horizon);
  data.limit = seq.limit;
  if (theta == nullptr) {
    const auto cps = detail::prefix_checkpoints(horizon);
    CompensatedSum acc;
    std::array<std::uint64_t, kEpsGridSize + 1> hist{};
    std::size_t next = 0;
    for (std::uint64_t n = 1; n <= horizon && next < cps.size(); ++n) {
      const double v = std::abs(seq(n) - seq.limit);
      if (v != 0.0) {
        acc.add(v);
        ++hist[first_exceeded_level(v)];
      }
      if (n == cps[next]) {
        ResidualRow row;
        row.scale = static_cast<double>(n);
        row.width = static_cast<double>(n);
        row.sum = acc.value();
        std::uint64_t running = 0;
        for (int j = 0; j < kEpsGridSize; ++j) {
          running += hist[j];
          row.counts[j] = running;
        }
        data.rows.push_back(row);
        ++next;
      }
    }
    return data;
  }

  data.lacunary = true;
  data.theta_name = theta->name();
  const std::size_t R = theta->complete_blocks_within(static_cast<double>(horizon));
  if (R == 0) return data;
  const auto bounds = theta->boundaries(R);
  data.rows.resize(R);
  const int workers = std::max(1, threads);
  if (workers == 1 || R < 4) {
    for (std::size_t r = 1; r <= R; ++r)
      data.rows[r - 1] = detail::scan_block(seq, seq.limit, r, bounds[r - 1], bounds[r]);
  } else {
    std::vector<std::future<void>> jobs;
    std::atomic<std::size_t> cursor{1};
    for (int w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&] {
        while (true) {
          const std::size_t r = cursor.fetch_add(1);
          if (r > R) return;
          data.rows[r - 1] = detail::scan_block(seq, seq.limit, r, bounds[r - 1], bounds[r]);
        }
      }));
    }
    for (auto& j : jobs) j.get();
  }
  return data;
}

// d_f over prefixes, or d_{f,theta} over blocks: f(count)/f(denominator).
inline LimitEstimate f_density(const Modulus& f, const SetPredicate& member,
                               std::uint64_t horizon, const LacunaryTheta* theta = nullptr,
                               const VerdictPolicy& policy = {}) {
  std::vector<std::pair<double, double>> traj;
  double top = static_cast<double>(horizon);
  if (theta == nullptr) {
    const auto cps = detail::prefix_checkpoints(horizon);
    std::uint64_t count = 0;
    std::size_t next = 0;
    for (std::uint64_t n = 1; n <= horizon && next < cps.size(); ++n) {
      if (member(n)) ++count;
      if (n == cps[next]) {
        traj.emplace_back(static_cast<double>(n),
                          f(static_cast<double>(count)) / f(static_cast<double>(n)));
        ++next;
      }
    }
  } else {
    const std::size_t R = theta->complete_blocks_within(static_cast<double>(horizon));
    const auto bounds = theta->boundaries(R);
    for (std::size_t r = 1; r <= R; ++r) {
      std::uint64_t count = 0;
      const auto lo = static_cast<std::uint64_t>(bounds[r - 1]) + 1;
      const auto hi = static_cast<std::uint64_t>(bounds[r]);
      for (std::uint64_t n = lo; n <= hi; ++n)
        if (member(n)) ++count;
      traj.emplace_back(bounds[r], f(static_cast<double>(count)) / f(bounds[r] - bounds[r - 1]));
    }
    if (R > 0) top = bounds[R];
  }
  return finalize_estimate(std::move(traj), top, policy);
}

namespace detail {

inline LimitEstimate density_estimate_from_rows(const ResidualData& data, const Modulus& f,
                                                int level, const VerdictPolicy& policy) {
  std::vector<std::pair<double, double>> traj;
  traj.reserve(data.rows.size());
  for (const auto& row : data.rows)
    traj.emplace_back(row.scale,
                      f(static_cast<double>(row.counts[level])) / f(row.width));
  const double top = data.rows.empty() ? data.horizon : data.rows.back().scale;
  return finalize_estimate(std::move(traj), top, policy);
}

inline LimitEstimate cesaro_estimate_from_rows(const ResidualData& data, const Modulus& f,
                                               const VerdictPolicy& policy) {
  std::vector<std::pair<double, double>> traj;
  traj.reserve(data.rows.size());
  for (const auto& row : data.rows) traj.emplace_back(row.scale, f(row.sum) / f(row.width));
  const double top = data.rows.empty() ? data.horizon : data.rows.back().scale;
  return finalize_estimate(std::move(traj), top, policy);
}

}  // namespace detail

// Largest dyadic level the horizon can decide: an exceedance set at level eps
// is only trusted once the scan extends well past the scale where catalog
// residual envelopes cross eps, pinned as eps >= sqrt(100/H). Below that every
// not-yet-converged prefix shows density one and would certify falsely.
inline int max_decidable_level(double horizon) {
  if (!(horizon > 100.0)) return 0;
  const int j = static_cast<int>(std::floor(0.5 * std::log2(horizon / 100.0)));
  return std::clamp(j, 0, kEpsGridSize - 1);
}

// Statistical convergence in its four flavours, selected by the arguments:
// identity f + no theta is the classical test, theta switches to per-block
// densities, a non-identity f modulates both count and denominator.
inline Verdict test_statistical_on(const ResidualData& data, const Modulus& f,
                                   const VerdictPolicy& policy = {}) {
  const int J = max_decidable_level(data.horizon);
  std::vector<EvidenceItem> items;
  if (J >= 1) {
    for (int j = 0; j <= J; ++j) {
      EvidenceItem item;
      item.label = "eps=2^-" + std::to_string(j);
      item.estimate = detail::density_estimate_from_rows(data, f, j, policy);
      item.status = classify_estimate(item.estimate, policy);
      items.push_back(std::move(item));
    }
  }
  return aggregate_verdict(std::move(items));
}

inline Verdict test_statistical(const SequenceSpec& seq, const Modulus& f,
                                const LacunaryTheta* theta, std::uint64_t horizon,
                                const VerdictPolicy& policy = {}, int threads = 1) {
  const ResidualData data = residual_block_sums(seq, theta, horizon, threads);
  return test_statistical_on(data, f, policy);
}

inline Verdict test_strong_cesaro_on(const ResidualData& data, const Modulus& f,
                                     const VerdictPolicy& policy = {}) {
  EvidenceItem item;
  item.label = "residual_mean";
  item.estimate = detail::cesaro_estimate_from_rows(data, f, policy);
  item.status = classify_estimate(item.estimate, policy);
  return aggregate_verdict({std::move(item)});
}

inline Verdict test_strong_cesaro(const SequenceSpec& seq, const Modulus& f,
                                  const LacunaryTheta* theta, std::uint64_t horizon,
                                  const VerdictPolicy& policy = {}, int threads = 1) {
  const ResidualData data = residual_block_sums(seq, theta, horizon, threads);
  return test_strong_cesaro_on(data, f, policy);
}

struct IntegrabilityReport {
  std::vector<double> m_grid;
  std::vector<double> values;  // sup over blocks of the truncated block mass per cutoff
  bool normalized = true;
  Verdict verdict;
};

// Truncated block mass sup_t (1/h_t) sum_{k in I_t, |x_k - L| >= M} |x_k - L|.
// The (1/h_t)-normalized form is the default; the raw block sum is available
// behind the flag.
inline IntegrabilityReport test_uniform_integrability(const SequenceSpec& seq,
                                                      const LacunaryTheta& theta,
                                                      const std::vector<double>& m_grid,
                                                      std::size_t R, bool normalized = true,
                                                      const VerdictPolicy& policy = {}) {
  if (m_grid.empty()) throw Error(Errc::invalid_params, "M grid is empty");
  for (std::size_t i = 0; i + 1 < m_grid.size(); ++i)
    if (!(m_grid[i] < m_grid[i + 1]))
      throw Error(Errc::invalid_params, "M grid must strictly increase");
  if (R < 10) throw Error(Errc::invalid_params, "integrability scans need R >= 10");

  IntegrabilityReport rep;
  rep.m_grid = m_grid;
  rep.normalized = normalized;
  rep.values.assign(m_grid.size(), 0.0);
  const auto bounds = theta.boundaries(R);
  std::vector<CompensatedSum> acc(m_grid.size());
  for (std::size_t r = 1; r <= R; ++r) {
    for (auto& a : acc) a.reset();
    const auto lo = static_cast<std::uint64_t>(bounds[r - 1]) + 1;
    const auto hi = static_cast<std::uint64_t>(bounds[r]);
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const double v = std::abs(seq(n) - seq.limit);
      for (std::size_t i = 0; i < m_grid.size(); ++i) {
        if (v >= m_grid[i]) acc[i].add(v);
        else break;
      }
    }
    const double h = bounds[r] - bounds[r - 1];
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
      const double mass = normalized ? acc[i].value() / h : acc[i].value();
      rep.values[i] = std::max(rep.values[i], mass);
    }
  }

  EvidenceItem item;
  item.label = "truncated_block_mass";
  for (std::size_t i = 0; i < m_grid.size(); ++i)
    item.estimate.trajectory.emplace_back(m_grid[i], rep.values[i]);
  item.estimate.horizon = m_grid.back();
  item.estimate.value = rep.values.back();
  const double final_v = rep.values.back();
  const bool stalled = rep.values.size() >= 2 &&
                       std::abs(rep.values.back() - rep.values[rep.values.size() - 2]) <=
                           1e-2 * std::max(1.0, std::abs(final_v));
  item.estimate.plateau = stalled || final_v < policy.holds_threshold;
  if (final_v < policy.holds_threshold) item.status = Status::holds;
  else if (final_v >= policy.fails_threshold && stalled) item.status = Status::fails;
  else item.status = Status::inconclusive;
  rep.verdict = aggregate_verdict({std::move(item)});
  return rep;
}

// Scan cache: one residual pass per (sequence, theta, limit, horizon) serves
// all moduli and both tests.
class ScanCache {
 public:
  const ResidualData& get(const SequenceSpec& seq, const LacunaryTheta* theta,
                          std::uint64_t horizon, int threads = 1) {
    std::string key = seq.name + "|" + (theta ? theta->name() : "") + "|" +
                      std::to_string(horizon) + "|" + std::to_string(seq.limit);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      auto data = std::make_shared<ResidualData>(residual_block_sums(seq, theta, horizon, threads));
      it = cache_.emplace(std::move(key), std::move(data)).first;
    }
    return *it->second;
  }

 private:
  std::map<std::string, std::shared_ptr<ResidualData>> cache_;
};

}  // namespace sumlab
