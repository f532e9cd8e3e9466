#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/errors.hpp"

namespace sumlab {

enum class ThetaKind { geometric, polynomial, explicit_list, custom };

struct BlockStats {
  double k_prev = 0;
  double k_cur = 0;
  double h = 0;
  double q = 0;
};

struct RatioProfile {
  std::size_t blocks = 0;
  double liminf_est = 0;
  double limsup_est = 0;
  bool unbounded_flag = false;
};

// Block sequence k_0 = 0 < k_1 < k_2 < ... with intervals I_r = (k_{r-1}, k_r].
// Terms are stored as integral-valued doubles so that super-geometric prefixes
// (which leave the 64-bit range quickly) keep exact block ratios; index
// arithmetic against sequence positions only ever happens below 2^53.
class LacunaryTheta {
 public:
  static LacunaryTheta geometric(double rho, std::string name) {
    if (!(rho > 1.0)) throw Error(Errc::bad_params, "geometric ratio must exceed 1");
    LacunaryTheta t(std::move(name), ThetaKind::geometric);
    t.rho_ = rho;
    t.validate();
    return t;
  }

  static LacunaryTheta polynomial(int degree, std::string name) {
    if (degree < 2) throw Error(Errc::bad_params, "polynomial degree must be >= 2");
    LacunaryTheta t(std::move(name), ThetaKind::polynomial);
    t.degree_ = degree;
    t.validate();
    return t;
  }

  static LacunaryTheta explicit_list(std::vector<double> ks, std::string name) {
    LacunaryTheta t(std::move(name), ThetaKind::explicit_list);
    double prev = 0.0;
    for (double k : ks) {
      if (std::floor(k) != k) throw Error(Errc::bad_params, "explicit terms must be integral");
      if (!(k > prev)) throw Error(Errc::not_increasing, "explicit terms must strictly increase");
      prev = k;
    }
    if (ks.empty()) throw Error(Errc::bad_params, "explicit list is empty");
    t.state_->ks = std::move(ks);
    t.finite_ = true;
    t.validate();
    return t;
  }

  static LacunaryTheta custom(std::function<double(std::size_t)> gen, std::string name,
                              std::size_t available_blocks = 1u << 20) {
    if (!gen) throw Error(Errc::bad_params, "custom theta needs a generator");
    LacunaryTheta t(std::move(name), ThetaKind::custom);
    t.custom_gen_ = std::move(gen);
    t.custom_limit_ = available_blocks;
    t.validate();
    return t;
  }

  const std::string& name() const { return name_; }
  ThetaKind kind() const { return kind_; }
  double rho() const { return rho_; }
  int degree() const { return degree_; }

  // k_r; r = 0 gives 0. Throws if r is past a finite prefix.
  double k(std::size_t r) const {
    if (r == 0) return 0.0;
    std::lock_guard<std::mutex> lock(state_->m);
    extend_to_locked(r);
    if (r > state_->ks.size())
      throw Error(Errc::bad_params, "block index beyond available prefix of " + name_);
    return state_->ks[r - 1];
  }

  double h(std::size_t r) const {
    if (r == 0) throw Error(Errc::bad_params, "h is defined for r >= 1");
    std::lock_guard<std::mutex> lock(state_->m);
    extend_to_locked(r);
    if (r > state_->ks.size())
      throw Error(Errc::bad_params, "block index beyond available prefix of " + name_);
    const double prev = (r == 1) ? 0.0 : state_->ks[r - 2];
    return state_->ks[r - 1] - prev;
  }

  // q_1 would divide by k_0 = 0; it is reported against 1 instead, and ratio
  // statistics start at r = 2.
  double q(std::size_t r) const {
    const double kc = k(r);
    const double kp = (r >= 2) ? k(r - 1) : 1.0;
    return kc / kp;
  }

  // Reporting view: at r = 1 the zero predecessor is replaced by 1, so the
  // tuple reads (1, k_1, k_1 - 1, k_1).
  BlockStats block_stats(std::size_t r) const {
    if (r < 1) throw Error(Errc::bad_params, "block index starts at 1");
    BlockStats s;
    s.k_cur = k(r);
    s.k_prev = (r == 1) ? 1.0 : k(r - 1);
    s.h = s.k_cur - s.k_prev;
    s.q = s.k_cur / s.k_prev;
    return s;
  }

  bool contains(std::size_t r, std::uint64_t n) const {
    const double x = static_cast<double>(n);
    return k(r - 1) < x && x <= k(r);
  }

  // Block index r with n in I_r.
  std::size_t block_of(std::uint64_t n) const {
    if (n == 0) throw Error(Errc::bad_params, "sequence indices start at 1");
    const double x = static_cast<double>(n);
    std::lock_guard<std::mutex> lock(state_->m);
    while ((state_->ks.empty() || state_->ks.back() < x) && extend_one_locked()) {
    }
    const auto& ks = state_->ks;
    if (ks.empty() || ks.back() < x)
      throw Error(Errc::bad_params, "index beyond available prefix of " + name_);
    const auto it = std::lower_bound(ks.begin(), ks.end(), x);
    return static_cast<std::size_t>(it - ks.begin()) + 1;
  }

  // Largest R with k_R <= horizon (0 when the first block is incomplete).
  std::size_t complete_blocks_within(double horizon) const {
    std::lock_guard<std::mutex> lock(state_->m);
    while ((state_->ks.empty() || state_->ks.back() <= horizon) && extend_one_locked()) {
    }
    const auto& ks = state_->ks;
    const auto it = std::upper_bound(ks.begin(), ks.end(), horizon);
    return static_cast<std::size_t>(it - ks.begin());
  }

  // Consecutive block boundaries k_0..k_R as plain doubles, for scan loops.
  std::vector<double> boundaries(std::size_t R) const {
    std::vector<double> out;
    out.reserve(R + 1);
    out.push_back(0.0);
    for (std::size_t r = 1; r <= R; ++r) out.push_back(k(r));
    return out;
  }

  // For finite prefixes this is the exact block count; closed-form kinds
  // report the count currently cached (they extend on demand).
  std::size_t blocks_available() const {
    std::lock_guard<std::mutex> lock(state_->m);
    if (kind_ == ThetaKind::explicit_list) return state_->ks.size();
    if (kind_ == ThetaKind::custom) {
      while (state_->ks.size() < custom_limit_ && extend_one_locked()) {
      }
      return state_->ks.size();
    }
    return state_->ks.size();
  }

  // Monotone block lengths for limsup scans, reaching up to max_scale. Beyond
  // the enumerable range the closed-form kinds continue analytically with a
  // geometric subsample of the block index.
  std::vector<double> scan_lengths(double max_scale, std::size_t budget = 20000) const {
    std::vector<double> out;
    double last = 0.0;
    std::size_t r = 1;
    while (out.size() < budget) {
      double hr;
      if (kind_ == ThetaKind::polynomial && r > 4096) {
        hr = poly_h(static_cast<double>(r));
      } else {
        std::lock_guard<std::mutex> lock(state_->m);
        extend_to_locked(r);
        if (r > state_->ks.size()) break;
        const double prev = (r == 1) ? 0.0 : state_->ks[r - 2];
        hr = state_->ks[r - 1] - prev;
      }
      if (!(hr <= max_scale)) break;
      if (hr > last) {
        out.push_back(hr);
        last = hr;
      }
      if (kind_ == ThetaKind::polynomial && r > 4096) {
        r = std::max(r + 1, static_cast<std::size_t>(static_cast<double>(r) * 1.04));
        if (static_cast<double>(r) > 1e15) break;
      } else {
        ++r;
      }
    }
    return out;
  }

  RatioProfile ratio_profile(std::size_t R) const {
    if (R < 10) throw Error(Errc::bad_params, "ratio_profile needs R >= 10");
    std::size_t avail = R;
    {
      std::lock_guard<std::mutex> lock(state_->m);
      extend_to_locked(R);
      avail = std::min(R, state_->ks.size());
    }
    if (avail < 4) throw Error(Errc::bad_params, "theta prefix too short for a ratio profile");
    RatioProfile prof;
    prof.blocks = avail;
    const std::size_t tail_lo = std::max<std::size_t>(2, avail / 2);
    double tmin = std::numeric_limits<double>::infinity();
    double tmax = 0.0;
    double max_full = 0.0, max_half = 0.0;
    for (std::size_t r = 2; r <= avail; ++r) {
      const double qr = q(r);
      if (r >= tail_lo) {
        tmin = std::min(tmin, qr);
        tmax = std::max(tmax, qr);
      }
      max_full = std::max(max_full, qr);
      if (r <= std::max<std::size_t>(2, avail / 2)) max_half = std::max(max_half, qr);
    }
    prof.liminf_est = tmin;
    prof.limsup_est = tmax;
    prof.unbounded_flag = max_full >= 1.5 * max_half;
    return prof;
  }

 private:
  struct State {
    mutable std::mutex m;
    std::vector<double> ks;
    double next_exponent = 1.0;  // geometric generation index
  };

  LacunaryTheta(std::string name, ThetaKind kind)
      : name_(std::move(name)), kind_(kind), state_(std::make_shared<State>()) {}

  double poly_h(double r) const {
    const double d = static_cast<double>(degree_);
    if (r < 3e7) return std::pow(r, d) - std::pow(r - 1.0, d);
    return d * std::pow(r, d - 1.0) * (1.0 - (d - 1.0) / (2.0 * r));
  }

  // Appends one block; returns false when the prefix cannot grow further.
  bool extend_one_locked() const {
    auto& ks = state_->ks;
    switch (kind_) {
      case ThetaKind::geometric: {
        double last = ks.empty() ? 0.0 : ks.back();
        while (true) {
          const double raw = std::pow(rho_, state_->next_exponent);
          if (!(raw < 1e290)) return false;
          state_->next_exponent += 1.0;
          const double v = std::ceil(raw);
          if (v > last) {
            ks.push_back(v);
            return true;
          }
        }
      }
      case ThetaKind::polynomial: {
        const double r = static_cast<double>(ks.size() + 1);
        const double v = std::pow(r, static_cast<double>(degree_));
        if (!(v < 1e290)) return false;
        ks.push_back(v);
        return true;
      }
      case ThetaKind::explicit_list:
        return false;
      case ThetaKind::custom: {
        const std::size_t r = ks.size() + 1;
        if (r > custom_limit_) return false;
        const double v = custom_gen_(r);
        const double last = ks.empty() ? 0.0 : ks.back();
        if (std::floor(v) != v)
          throw Error(Errc::bad_params, "custom theta produced a non-integral term");
        if (!(v > last)) throw Error(Errc::not_increasing, "custom theta must strictly increase");
        if (!(v < 1e290)) return false;
        ks.push_back(v);
        return true;
      }
    }
    return false;
  }

  void extend_to_locked(std::size_t r) const {
    while (state_->ks.size() < r && extend_one_locked()) {
    }
  }

  void validate() {
    std::lock_guard<std::mutex> lock(state_->m);
    extend_to_locked(200);
    const auto& ks = state_->ks;
    if (ks.empty()) throw Error(Errc::bad_params, "theta has no blocks");
    double hmax = 0.0;
    double prev = 0.0;
    const std::size_t limit = std::min<std::size_t>(200, ks.size());
    for (std::size_t i = 0; i < limit; ++i) {
      hmax = std::max(hmax, ks[i] - prev);
      prev = ks[i];
    }
    if (hmax < 10.0)
      throw Error(Errc::not_lacunary,
                  "block lengths of " + name_ + " do not reach 10 within 200 blocks");
  }

  std::string name_;
  ThetaKind kind_;
  double rho_ = 2.0;
  int degree_ = 2;
  bool finite_ = false;
  std::function<double(std::size_t)> custom_gen_;
  std::size_t custom_limit_ = 0;
  std::shared_ptr<State> state_;
};

}  // namespace sumlab
