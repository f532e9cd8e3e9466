#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/catalog.hpp"
#include "sumlab/convergence.hpp"
#include "sumlab/counterexamples.hpp"
#include "sumlab/errors.hpp"
#include "sumlab/estimate.hpp"
#include "sumlab/phi.hpp"

namespace sumlab {

enum class LawId {
  N_theta_f_subset_N_theta,
  S_theta_eq_S_theta_f,
  N_theta_f_eq_N_theta,
  converse_theta_compat_stat,
  converse_theta_compat_cesaro,
  N_theta_f_subset_S_theta_f,
  KhanOrhan_forward,
  KhanOrhan_converse,
  P5_liminf_forward,
  P5_liminf_converse,
  P5_limsup_forward,
  P5_limsup_converse,
  Corollary_ratio_iff,
};

inline const std::vector<std::pair<LawId, const char*>>& law_names() {
  static const std::vector<std::pair<LawId, const char*>> names = {
      {LawId::N_theta_f_subset_N_theta, "N_theta_f_subset_N_theta"},
      {LawId::S_theta_eq_S_theta_f, "S_theta_eq_S_theta_f"},
      {LawId::N_theta_f_eq_N_theta, "N_theta_f_eq_N_theta"},
      {LawId::converse_theta_compat_stat, "converse_theta_compat_stat"},
      {LawId::converse_theta_compat_cesaro, "converse_theta_compat_cesaro"},
      {LawId::N_theta_f_subset_S_theta_f, "N_theta_f_subset_S_theta_f"},
      {LawId::KhanOrhan_forward, "KhanOrhan_forward"},
      {LawId::KhanOrhan_converse, "KhanOrhan_converse"},
      {LawId::P5_liminf_forward, "P5_liminf_forward"},
      {LawId::P5_liminf_converse, "P5_liminf_converse"},
      {LawId::P5_limsup_forward, "P5_limsup_forward"},
      {LawId::P5_limsup_converse, "P5_limsup_converse"},
      {LawId::Corollary_ratio_iff, "Corollary_ratio_iff"},
  };
  return names;
}

inline std::string to_string(LawId id) {
  for (const auto& [law, name] : law_names())
    if (law == id) return name;
  return "unknown";
}

inline LawId law_from_string(const std::string& s) {
  for (const auto& [law, name] : law_names())
    if (s == name) return law;
  throw Error(Errc::unknown_law, s);
}

struct LawInstance {
  LawId law = LawId::N_theta_f_subset_N_theta;
  std::string modulus;
  std::string theta;
  std::string seq;
  std::uint64_t horizon = 0;  // 0 = per-theta default
  bool corrupt = false;
};

enum class Outcome { consistent, violated, inconclusive };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::consistent: return "Consistent";
    case Outcome::violated: return "Violated";
    case Outcome::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct ComponentResult {
  std::string label;
  Status status = Status::inconclusive;
  double value = 0.0;
  LimitEstimate estimate;  // may be empty for scalar evidence

  bool certified() const { return status != Status::inconclusive; }
};

struct TheoremVerdict {
  LawId law = LawId::N_theta_f_subset_N_theta;
  std::string modulus, theta, seq;
  std::uint64_t horizon = 0;
  Outcome outcome = Outcome::inconclusive;
  std::string note;
  std::vector<ComponentResult> components;
};

// Evaluates one theorem instance at a time; verdicts never report Violated on
// the strength of an uncertified component.
class Harness {
 public:
  Harness(const Catalog& cat, VerdictPolicy policy = {}, int threads = 1)
      : cat_(cat), policy_(policy), threads_(threads) {
    policy_.validate();
  }

  std::uint64_t default_horizon(const LacunaryTheta& theta) const {
    double k40 = 0.0;
    std::size_t r = 40;
    if (theta.kind() == ThetaKind::explicit_list)
      r = std::min<std::size_t>(r, theta.blocks_available());
    try {
      k40 = theta.k(r);
    } catch (const Error&) {
      k40 = 0.0;
    }
    const double h = std::clamp(std::max(1e6, k40), 1e6, 1e7);
    return static_cast<std::uint64_t>(h);
  }

  TheoremVerdict run_inclusion_check(const LawInstance& inst) {
    TheoremVerdict tv;
    tv.law = inst.law;
    tv.modulus = inst.modulus;
    tv.theta = inst.theta;
    tv.seq = inst.seq;
    const Modulus& f = cat_.modulus(inst.modulus);
    const LacunaryTheta& th = cat_.theta(inst.theta);
    const SequenceSpec& seq = cat_.sequence(inst.seq);
    const std::uint64_t H = inst.horizon ? inst.horizon : default_horizon(th);
    tv.horizon = H;

    switch (inst.law) {
      case LawId::N_theta_f_subset_N_theta:
        return implication(tv, cesaro(seq, f, &th, H, "N_theta_f"),
                           cesaro(seq, identity(), &th, H, "N_theta"), inst.corrupt);
      case LawId::N_theta_f_subset_S_theta_f:
        return implication(tv, cesaro(seq, f, &th, H, "N_theta_f"),
                           statistical(seq, f, &th, H, "S_theta_f"), inst.corrupt);
      case LawId::S_theta_eq_S_theta_f: {
        if (!hypothesis_theta_compat(tv, f, th, true)) return tv;
        return equality(tv, statistical(seq, identity(), &th, H, "S_theta"),
                        statistical(seq, f, &th, H, "S_theta_f"), inst.corrupt);
      }
      case LawId::N_theta_f_eq_N_theta: {
        if (!hypothesis_theta_compat(tv, f, th, true)) return tv;
        return equality(tv, cesaro(seq, identity(), &th, H, "N_theta"),
                        cesaro(seq, f, &th, H, "N_theta_f"), inst.corrupt);
      }
      case LawId::converse_theta_compat_stat: {
        if (!hypothesis_theta_compat(tv, f, th, false)) return tv;
        return witness_separation(tv, f, th, seq, H, /*statistical_side=*/true);
      }
      case LawId::converse_theta_compat_cesaro: {
        if (!hypothesis_theta_compat(tv, f, th, false)) return tv;
        return witness_separation(tv, f, th, seq, H, /*statistical_side=*/false);
      }
      case LawId::KhanOrhan_forward: {
        if (!hypothesis_theta_compat(tv, f, th, true)) return tv;
        auto a1 = statistical(seq, f, &th, H, "S_theta_f");
        auto a2 = integrability(tv, seq, th, H);
        if (!a2) {
          tv.outcome = Outcome::inconclusive;
          if (tv.note.empty()) tv.note = "integrability scan unavailable on this theta";
          tv.components.push_back(a1);
          return tv;
        }
        ComponentResult antecedent;
        antecedent.label = "S_theta_f_and_I_theta";
        if (a1.status == Status::holds && a2->status == Status::holds)
          antecedent.status = Status::holds;
        else if (a1.status == Status::fails || a2->status == Status::fails)
          antecedent.status = Status::fails;
        antecedent.value = std::max(a1.value, a2->value);
        tv.components.push_back(a1);
        tv.components.push_back(*a2);
        return implication(tv, antecedent, cesaro(seq, f, &th, H, "N_theta_f"), inst.corrupt,
                           /*push_antecedent=*/false);
      }
      case LawId::KhanOrhan_converse: {
        if (!hypothesis_theta_compat(tv, f, th, false)) return tv;
        return th3_separation(tv, f, th, seq, H);
      }
      case LawId::P5_liminf_forward: {
        if (!hypothesis_ratio(tv, th, RatioHyp::liminf_above_one)) return tv;
        return implication(tv, cesaro(seq, f, nullptr, H, "N_f"),
                           cesaro(seq, f, &th, H, "N_theta_f"), inst.corrupt);
      }
      case LawId::P5_liminf_converse: {
        if (!hypothesis_compat(tv, f, true)) return tv;
        const auto prof = profile(th);
        if (prof.liminf_est >= 1.05) {
          tv.outcome = Outcome::consistent;
          tv.note = "liminf certified above 1; the conclusion holds outright";
          return tv;
        }
        auto a = cesaro(seq, f, nullptr, H, "N_f");
        auto b = cesaro(seq, f, &th, H, "N_theta_f");
        tv.components.push_back(a);
        tv.components.push_back(b);
        if (a.status == Status::holds && b.status == Status::fails) {
          tv.outcome = Outcome::consistent;
          tv.note = "separation exhibited while liminf sits at 1";
        } else {
          tv.outcome = Outcome::inconclusive;
          tv.note = "no certified exhibitor of N_f beyond N_theta_f at this horizon";
        }
        return tv;
      }
      case LawId::P5_limsup_forward: {
        if (!hypothesis_compat(tv, f, true)) return tv;
        if (!hypothesis_ratio(tv, th, RatioHyp::limsup_finite)) return tv;
        return implication(tv, cesaro(seq, f, &th, H, "N_theta_f"),
                           cesaro(seq, f, nullptr, H, "N_f"), inst.corrupt);
      }
      case LawId::P5_limsup_converse: {
        if (!hypothesis_theta_compat(tv, f, th, true)) return tv;
        if (!hypothesis_ratio(tv, th, RatioHyp::limsup_unbounded)) return tv;
        return gap_separation(tv, f, th, seq, H);
      }
      case LawId::Corollary_ratio_iff: {
        if (!hypothesis_compat(tv, f, true)) return tv;
        const auto prof = profile(th);
        const bool ratio_ok = prof.liminf_est >= 1.05 && !prof.unbounded_flag &&
                              prof.limsup_est <= 1000.0;
        if (ratio_ok) {
          return equality(tv, cesaro(seq, f, &th, H, "N_theta_f"),
                          cesaro(seq, f, nullptr, H, "N_f"), inst.corrupt);
        }
        auto a = cesaro(seq, f, &th, H, "N_theta_f");
        auto b = cesaro(seq, f, nullptr, H, "N_f");
        tv.components.push_back(a);
        tv.components.push_back(b);
        if (a.certified() && b.certified() && a.status != b.status) {
          tv.outcome = Outcome::consistent;
          tv.note = "ratio condition fails and the spaces separate";
        } else {
          tv.outcome = Outcome::inconclusive;
          tv.note = "ratio condition fails; no certified separation on this instance";
        }
        return tv;
      }
    }
    throw Error(Errc::unknown_law, "unhandled law id");
  }

  const ClassifyResult& compat(const Modulus& f, const LacunaryTheta* theta) {
    const std::string key = f.name + "|" + (theta ? theta->name() : std::string("global"));
    auto it = compat_cache_.find(key);
    if (it == compat_cache_.end()) {
      it = compat_cache_
               .emplace(key, classify_compatibility(f, default_eps_grid(), 10000000ull, theta))
               .first;
    }
    return it->second;
  }

  const RatioProfile& profile(const LacunaryTheta& th) {
    auto it = profile_cache_.find(th.name());
    if (it == profile_cache_.end()) {
      std::size_t R = 1000;
      if (th.kind() == ThetaKind::explicit_list)
        R = std::max<std::size_t>(10, th.blocks_available());
      else if (th.kind() == ThetaKind::geometric)
        R = 200;
      it = profile_cache_.emplace(th.name(), th.ratio_profile(R)).first;
    }
    return it->second;
  }

  ScanCache& scans() { return scans_; }

 private:
  enum class RatioHyp { liminf_above_one, limsup_finite, limsup_unbounded };

  const Modulus& identity() const { return cat_.modulus("identity"); }

  ComponentResult statistical(const SequenceSpec& seq, const Modulus& f,
                              const LacunaryTheta* th, std::uint64_t H,
                              const std::string& label) {
    const auto& data = scans_.get(seq, th, H, threads_);
    Verdict v = test_statistical_on(data, f, policy_);
    ComponentResult c;
    c.label = label;
    c.status = v.status;
    double worst = 0.0;
    for (const auto& e : v.evidence) worst = std::max(worst, e.estimate.value);
    c.value = worst;
    if (!v.evidence.empty()) c.estimate = v.evidence.back().estimate;
    return c;
  }

  ComponentResult cesaro(const SequenceSpec& seq, const Modulus& f, const LacunaryTheta* th,
                         std::uint64_t H, const std::string& label) {
    const auto& data = scans_.get(seq, th, H, threads_);
    Verdict v = test_strong_cesaro_on(data, f, policy_);
    ComponentResult c;
    c.label = label;
    c.status = v.status;
    c.value = v.evidence.empty() ? 0.0 : v.evidence.front().estimate.value;
    if (!v.evidence.empty()) c.estimate = v.evidence.front().estimate;
    return c;
  }

  std::optional<ComponentResult> integrability(TheoremVerdict& tv, const SequenceSpec& seq,
                                               const LacunaryTheta& th, std::uint64_t H) {
    const std::size_t R = th.complete_blocks_within(static_cast<double>(std::min<std::uint64_t>(H, 2000000ull)));
    if (R < 10) return std::nullopt;
    const std::vector<double> grid = {1, 2, 4, 8, 16};
    auto rep = test_uniform_integrability(seq, th, grid, std::min<std::size_t>(R, 40), true, policy_);
    ComponentResult c;
    c.label = "I_theta";
    c.status = rep.verdict.status;
    c.value = rep.values.back();
    if (!rep.verdict.evidence.empty()) c.estimate = rep.verdict.evidence.front().estimate;
    (void)tv;
    return c;
  }

  bool hypothesis_theta_compat(TheoremVerdict& tv, const Modulus& f, const LacunaryTheta& th,
                               bool want_compatible) {
    const auto& cls = compat(f, &th);
    const Compatibility want =
        want_compatible ? Compatibility::compatible : Compatibility::incompatible;
    if (cls.verdict == want) return true;
    tv.outcome = Outcome::inconclusive;
    std::ostringstream os;
    os << "hypothesis not certified: " << f.name << " on " << th.name() << " classified "
       << to_string(cls.verdict) << ", law needs " << to_string(want);
    tv.note = os.str();
    return false;
  }

  bool hypothesis_compat(TheoremVerdict& tv, const Modulus& f, bool want_compatible) {
    const auto& cls = compat(f, nullptr);
    const Compatibility want =
        want_compatible ? Compatibility::compatible : Compatibility::incompatible;
    if (cls.verdict == want) return true;
    tv.outcome = Outcome::inconclusive;
    tv.note = "hypothesis not certified: " + f.name + " classified " + to_string(cls.verdict);
    return false;
  }

  bool hypothesis_ratio(TheoremVerdict& tv, const LacunaryTheta& th, RatioHyp hyp) {
    const auto& prof = profile(th);
    bool ok = false;
    std::string need;
    switch (hyp) {
      case RatioHyp::liminf_above_one:
        ok = prof.liminf_est >= 1.05;
        need = "liminf q_r > 1";
        break;
      case RatioHyp::limsup_finite:
        ok = !prof.unbounded_flag && prof.limsup_est <= 1000.0;
        need = "limsup q_r < inf";
        break;
      case RatioHyp::limsup_unbounded:
        ok = prof.unbounded_flag;
        need = "limsup q_r = inf";
        break;
    }
    if (ok) return true;
    tv.outcome = Outcome::inconclusive;
    tv.note = "ratio hypothesis not certified on " + th.name() + " (" + need + ")";
    return false;
  }

  TheoremVerdict& implication(TheoremVerdict& tv, ComponentResult antecedent,
                              ComponentResult consequent, bool corrupt,
                              bool push_antecedent = true) {
    const Status claimed = corrupt ? Status::fails : Status::holds;
    if (push_antecedent) tv.components.push_back(antecedent);
    tv.components.push_back(consequent);
    if (antecedent.status == Status::fails) {
      tv.outcome = Outcome::consistent;
      tv.note = "antecedent certified failing; implication holds vacuously";
    } else if (antecedent.status == Status::inconclusive) {
      tv.outcome = Outcome::inconclusive;
      tv.note = "antecedent not certified";
    } else if (consequent.status == claimed) {
      tv.outcome = Outcome::consistent;
    } else if (consequent.status != Status::inconclusive) {
      tv.outcome = Outcome::violated;
      tv.note = "antecedent holds but consequent certified " +
                std::string(to_string(consequent.status));
    } else {
      tv.outcome = Outcome::inconclusive;
      tv.note = "consequent not certified";
    }
    return tv;
  }

  TheoremVerdict& equality(TheoremVerdict& tv, ComponentResult lhs, ComponentResult rhs,
                           bool corrupt) {
    tv.components.push_back(lhs);
    tv.components.push_back(rhs);
    if (!lhs.certified() || !rhs.certified()) {
      tv.outcome = Outcome::inconclusive;
      tv.note = "one side not certified";
      return tv;
    }
    const bool agree = lhs.status == rhs.status;
    const bool claim_agree = !corrupt;
    tv.outcome = (agree == claim_agree) ? Outcome::consistent : Outcome::violated;
    if (tv.outcome == Outcome::violated)
      tv.note = "verdicts certified " + std::string(agree ? "equal" : "different") +
                " against the claim";
    return tv;
  }

  // Converse laws: the paired construction must exhibit the separation. The
  // plain side is a certified verdict; the modulated side is witness-level
  // evidence (the block ratios the construction was built to pin down).
  TheoremVerdict& witness_separation(TheoremVerdict& tv, const Modulus& f,
                                     const LacunaryTheta& th, const SequenceSpec& seq,
                                     std::uint64_t H, bool statistical_side) {
    const auto ws = construction(tv, seq);
    if (!ws) return tv;
    ComponentResult plain = statistical_side
                                ? statistical(seq, identity(), &th, H, "S_theta")
                                : cesaro(seq, identity(), &th, H, "N_theta");
    tv.components.push_back(plain);

    double min_ratio = 1e300;
    for (std::size_t i = 0; i < ws->witness_blocks.size(); ++i) {
      const double h = th.h(ws->witness_blocks[i]);
      // Indicator support: the witness count and the block residual sum agree.
      const double mass = ws->witness_sizes[i] + 1.0;
      min_ratio = std::min(min_ratio, f(mass) / f(h));
    }
    ComponentResult wit;
    wit.label = statistical_side ? "S_theta_f_witness_ratio" : "N_theta_f_witness_ratio";
    wit.value = min_ratio;
    wit.status = (min_ratio >= 0.9 * ws->separation_c && ws->separation_c >= 0.1)
                     ? Status::fails
                     : Status::inconclusive;
    tv.components.push_back(wit);

    if (plain.status == Status::holds && wit.status == Status::fails) {
      tv.outcome = Outcome::consistent;
      tv.note = "separation exhibited along the witness blocks";
    } else {
      tv.outcome = Outcome::inconclusive;
      tv.note = "constructed separation not certified at this horizon";
    }
    return tv;
  }

  TheoremVerdict& th3_separation(TheoremVerdict& tv, const Modulus& f, const LacunaryTheta& th,
                                 const SequenceSpec& seq, std::uint64_t H) {
    const auto ws = construction(tv, seq);
    if (!ws) return tv;
    ComponentResult stat_side = statistical(seq, f, &th, H, "S_theta_f");
    tv.components.push_back(stat_side);
    auto integ = integrability(tv, seq, th, H);
    if (integ) tv.components.push_back(*integ);

    double min_ratio = 1e300;
    for (std::size_t i = 0; i < ws->witness_blocks.size(); ++i)
      min_ratio = std::min(min_ratio, ws->witness_ratios[i]);
    ComponentResult wit;
    wit.label = "N_theta_f_witness_ratio";
    wit.value = min_ratio;
    wit.status = (min_ratio >= 0.9 * ws->separation_c && ws->separation_c >= 0.1)
                     ? Status::fails
                     : Status::inconclusive;
    tv.components.push_back(wit);

    if (stat_side.status == Status::holds && integ && integ->status == Status::holds &&
        wit.status == Status::fails) {
      tv.outcome = Outcome::consistent;
      tv.note = "bounded construction sits in S_theta_f and I_theta yet stays out of N_theta_f";
    } else {
      tv.outcome = Outcome::inconclusive;
      tv.note = "constructed separation not certified at this horizon";
    }
    return tv;
  }

  TheoremVerdict& gap_separation(TheoremVerdict& tv, const Modulus& f, const LacunaryTheta& th,
                                 const SequenceSpec& seq, std::uint64_t H) {
    const auto ws = construction(tv, seq);
    if (!ws) return tv;
    ComponentResult lac = cesaro(seq, f, &th, H, "N_theta_f");
    ComponentResult pre0 = cesaro(seq, f, nullptr, H, "N_f_limit_0");
    SequenceSpec shifted = seq;
    shifted.name = seq.name + "@x0";
    shifted.limit = ws->x0;
    ComponentResult prex = cesaro(shifted, f, nullptr, H, "N_f_limit_x0");
    tv.components.push_back(lac);
    tv.components.push_back(pre0);
    tv.components.push_back(prex);
    if (lac.status == Status::holds && pre0.status == Status::fails &&
        prex.status == Status::fails) {
      tv.outcome = Outcome::consistent;
      tv.note = "lacunary convergence without prefix convergence on an unbounded-ratio theta";
    } else {
      tv.outcome = Outcome::inconclusive;
      tv.note = "gap separation not certified at this horizon";
    }
    return tv;
  }

  const WitnessedSequence* construction(TheoremVerdict& tv, const SequenceSpec& seq) {
    auto it = cat_.constructions.find(seq.name);
    if (it == cat_.constructions.end()) {
      tv.outcome = Outcome::inconclusive;
      tv.note = "law needs a constructed counterexample; " + seq.name + " carries no witness data";
      return nullptr;
    }
    return &it->second;
  }

  const Catalog& cat_;
  VerdictPolicy policy_;
  int threads_ = 1;
  ScanCache scans_;
  std::map<std::string, ClassifyResult> compat_cache_;
  std::map<std::string, RatioProfile> profile_cache_;
};

// ---- suite configs and reports ----------------------------------------------

inline std::vector<LawInstance> parse_suite_config(const std::string& text) {
  std::vector<LawInstance> rows;
  for (const auto& kv : parse_kv_blocks(text)) {
    LawInstance inst;
    inst.law = law_from_string(detail::require_key(kv, "law"));
    inst.modulus = detail::require_key(kv, "modulus");
    inst.theta = detail::require_key(kv, "theta");
    inst.seq = detail::require_key(kv, "seq");
    if (auto it = kv.find("horizon"); it != kv.end())
      inst.horizon = static_cast<std::uint64_t>(detail::parse_real(it->second));
    if (auto it = kv.find("corrupt"); it != kv.end()) {
      if (it->second == "true") inst.corrupt = true;
      else if (it->second == "false") inst.corrupt = false;
      else throw Error(Errc::bad_config, "corrupt must be true or false");
    }
    rows.push_back(inst);
  }
  return rows;
}

struct SuiteReport {
  std::vector<TheoremVerdict> rows;
  std::size_t consistent = 0, violated = 0, inconclusive = 0;
};

inline SuiteReport run_suite(const std::vector<LawInstance>& config, const Catalog& cat,
                             const VerdictPolicy& policy = {}, int threads = 1) {
  Harness harness(cat, policy, threads);
  SuiteReport rep;
  rep.rows.reserve(config.size());
  for (const auto& inst : config) rep.rows.push_back(harness.run_inclusion_check(inst));
  for (const auto& row : rep.rows) {
    switch (row.outcome) {
      case Outcome::consistent: ++rep.consistent; break;
      case Outcome::violated: ++rep.violated; break;
      case Outcome::inconclusive: ++rep.inconclusive; break;
    }
  }
  return rep;
}

}  // namespace sumlab
