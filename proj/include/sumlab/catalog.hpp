#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/counterexamples.hpp"
#include "sumlab/errors.hpp"
#include "sumlab/lacunary.hpp"
#include "sumlab/modulus.hpp"
#include "sumlab/sequences.hpp"

namespace sumlab {

struct Catalog {
  std::map<std::string, Modulus> moduli;
  std::map<std::string, LacunaryTheta> thetas;
  std::map<std::string, SequenceSpec> sequences;
  std::map<std::string, WitnessedSequence> constructions;
  std::map<std::string, SetPredicate> sets;

  const Modulus& modulus(const std::string& name) const {
    auto it = moduli.find(name);
    if (it == moduli.end()) throw Error(Errc::bad_config, "unknown modulus " + name);
    return it->second;
  }
  const LacunaryTheta& theta(const std::string& name) const {
    auto it = thetas.find(name);
    if (it == thetas.end()) throw Error(Errc::bad_config, "unknown theta " + name);
    return it->second;
  }
  const SequenceSpec& sequence(const std::string& name) const {
    auto it = sequences.find(name);
    if (it == sequences.end()) throw Error(Errc::bad_config, "unknown sequence " + name);
    return it->second;
  }
  const SetPredicate& set(const std::string& name) const {
    auto it = sets.find(name);
    if (it == sets.end()) throw Error(Errc::bad_config, "unknown set " + name);
    return it->second;
  }
};

// Terms of the explicit unbounded-ratio theta: six decade jumps, then ratios
// growing by 1.5x per block so the profile certifies unbounded growth while
// the first few blocks stay enumerable.
inline std::vector<double> explicit_unbounded_terms() {
  std::vector<double> ks;
  double k = 100.0;
  ks.push_back(k);
  for (int r = 2; r <= 24; ++r) {
    const double q = (r <= 6) ? 100.0 : std::round(100.0 * std::pow(1.5, r - 6));
    k = std::round(k * q);
    ks.push_back(k);
  }
  return ks;
}

inline Catalog builtin_catalog() {
  Catalog cat;
  for (auto m : {make_identity("identity"), make_power_sum(0.5, 0.5, "powersum"),
                 make_power_plus_log(0.5, "powerpluslog"), make_power_plus_log(1.0, "xpluslog"),
                 make_x_plus_ratio("xplusratio"), make_log1p("log1p"),
                 make_lambert_w("lambertw")})
    cat.moduli.emplace(m.name, m);

  cat.thetas.emplace("geo2", LacunaryTheta::geometric(2.0, "geo2"));
  cat.thetas.emplace("geo15", LacunaryTheta::geometric(1.5, "geo15"));
  cat.thetas.emplace("poly2", LacunaryTheta::polynomial(2, "poly2"));
  cat.thetas.emplace("expl_unb",
                     LacunaryTheta::explicit_list(explicit_unbounded_terms(), "expl_unb"));

  for (auto s : {seq_zero(), seq_inv_square(), seq_harmonic(), seq_inv_log(), seq_alt_inv_sqrt(),
                 seq_chi_evens(), seq_chi_squares(), seq_chi_cubes(), seq_chi_pow2()})
    cat.sequences.emplace(s.name, s);

  cat.sets.emplace("evens", set_evens());
  cat.sets.emplace("odds", set_odds());
  cat.sets.emplace("squares", set_squares());
  cat.sets.emplace("cubes", set_cubes());
  cat.sets.emplace("pow2", set_pow2());

  auto add_construction = [&cat](WitnessedSequence ws, const std::string& name) {
    ws.seq.name = name;
    cat.sequences.emplace(name, ws.seq);
    cat.constructions.emplace(name, std::move(ws));
  };
  const auto& geo2 = cat.theta("geo2");
  const auto& expl = cat.theta("expl_unb");
  add_construction(
      build_reciproco_sequence(cat.modulus("log1p"), geo2, eps_inv_k(24), 5),
      "reciproco_log1p_geo2");
  add_construction(
      build_reciproco_sequence(cat.modulus("lambertw"), geo2, eps_inv_k(24), 5),
      "reciproco_lambertw_geo2");
  add_construction(build_th3_sequence(cat.modulus("log1p"), geo2, eps_inv_k(24), 5),
                   "th3_log1p_geo2");
  add_construction(build_th3_sequence(cat.modulus("lambertw"), geo2, eps_inv_k(24), 5),
                   "th3_lambertw_geo2");
  add_construction(build_sember_gap_sequence(expl, 1.0, 4), "gap_expl_unb");
  return cat;
}

// ---- key=value catalog files -------------------------------------------------

inline std::vector<std::map<std::string, std::string>> parse_kv_blocks(const std::string& text) {
  std::vector<std::map<std::string, std::string>> blocks;
  std::map<std::string, std::string> current;
  std::istringstream in(text);
  std::string line;
  auto flush = [&] {
    if (!current.empty()) blocks.push_back(current);
    current.clear();
  };
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      flush();
      continue;
    }
    if (line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::bad_config, "expected key = value: " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    current[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  flush();
  return blocks;
}

namespace detail {

inline std::string require_key(const std::map<std::string, std::string>& kv,
                               const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw Error(Errc::bad_config, "missing key '" + key + "'");
  return it->second;
}

inline double parse_real(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw Error(Errc::bad_config, "trailing junk in number: " + s);
    return v;
  } catch (const std::invalid_argument&) {
    throw Error(Errc::bad_config, "not a number: " + s);
  }
}

inline std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_real(item));
  return out;
}

}  // namespace detail

inline void load_moduli(Catalog& cat, const std::string& text) {
  for (const auto& kv : parse_kv_blocks(text)) {
    const std::string name = detail::require_key(kv, "name");
    const std::string kind = detail::require_key(kv, "kind");
    Modulus m;
    if (kind == "identity") m = make_identity(name);
    else if (kind == "power_sum")
      m = make_power_sum(detail::parse_real(detail::require_key(kv, "p")),
                         detail::parse_real(detail::require_key(kv, "q")), name);
    else if (kind == "power_plus_log")
      m = make_power_plus_log(detail::parse_real(detail::require_key(kv, "p")), name);
    else if (kind == "x_plus_ratio") m = make_x_plus_ratio(name);
    else if (kind == "log1p") m = make_log1p(name);
    else if (kind == "lambert_w") m = make_lambert_w(name);
    else throw Error(Errc::bad_config, "unknown modulus kind " + kind);
    if (auto it = kv.find("declared"); it != kv.end()) {
      if (it->second == "compatible") m.declared = Compatibility::compatible;
      else if (it->second == "incompatible") m.declared = Compatibility::incompatible;
      else if (it->second == "unknown") m.declared = Compatibility::unknown;
      else throw Error(Errc::bad_config, "unknown declared_compatibility " + it->second);
    }
    cat.moduli.insert_or_assign(name, std::move(m));
  }
}

inline void load_thetas(Catalog& cat, const std::string& text) {
  for (const auto& kv : parse_kv_blocks(text)) {
    const std::string name = detail::require_key(kv, "name");
    const std::string kind = detail::require_key(kv, "kind");
    if (kind == "geometric") {
      cat.thetas.insert_or_assign(
          name, LacunaryTheta::geometric(detail::parse_real(detail::require_key(kv, "rho")), name));
    } else if (kind == "polynomial") {
      cat.thetas.insert_or_assign(
          name, LacunaryTheta::polynomial(
                    static_cast<int>(detail::parse_real(detail::require_key(kv, "degree"))), name));
    } else if (kind == "explicit") {
      cat.thetas.insert_or_assign(
          name, LacunaryTheta::explicit_list(
                    detail::parse_real_list(detail::require_key(kv, "terms")), name));
    } else {
      throw Error(Errc::bad_config, "unknown theta kind " + kind);
    }
  }
}

inline void load_sequences(Catalog& cat, const std::string& text) {
  for (const auto& kv : parse_kv_blocks(text)) {
    const std::string name = detail::require_key(kv, "name");
    const std::string kind = detail::require_key(kv, "kind");
    auto add = [&](SequenceSpec s) {
      s.name = name;
      cat.sequences.insert_or_assign(name, std::move(s));
    };
    if (kind == "zero") add(seq_zero());
    else if (kind == "inv_square") add(seq_inv_square());
    else if (kind == "harmonic") add(seq_harmonic());
    else if (kind == "inv_log") add(seq_inv_log());
    else if (kind == "alt_inv_sqrt") add(seq_alt_inv_sqrt());
    else if (kind == "chi_evens") add(seq_chi_evens());
    else if (kind == "chi_squares") add(seq_chi_squares());
    else if (kind == "chi_cubes") add(seq_chi_cubes());
    else if (kind == "chi_pow2") add(seq_chi_pow2());
    else if (kind == "reciproco" || kind == "th3") {
      const auto& f = cat.modulus(detail::require_key(kv, "modulus"));
      const auto& th = cat.theta(detail::require_key(kv, "theta"));
      const auto K =
          static_cast<std::size_t>(detail::parse_real(detail::require_key(kv, "witnesses")));
      std::vector<double> eps = eps_inv_k(K + 19);
      if (auto it = kv.find("eps"); it != kv.end() && it->second == "inv_pow2")
        eps = eps_inv_pow2(K + 19);
      WitnessedSequence ws = (kind == "reciproco") ? build_reciproco_sequence(f, th, eps, K)
                                                   : build_th3_sequence(f, th, eps, K);
      ws.seq.name = name;
      cat.sequences.insert_or_assign(name, ws.seq);
      cat.constructions.insert_or_assign(name, std::move(ws));
    } else if (kind == "gap") {
      const auto& th = cat.theta(detail::require_key(kv, "theta"));
      WitnessedSequence ws = build_sember_gap_sequence(
          th, detail::parse_real(detail::require_key(kv, "x0")),
          static_cast<std::size_t>(detail::parse_real(detail::require_key(kv, "ranges"))));
      ws.seq.name = name;
      cat.sequences.insert_or_assign(name, ws.seq);
      cat.constructions.insert_or_assign(name, std::move(ws));
    } else {
      throw Error(Errc::bad_config, "unknown sequence kind " + kind);
    }
  }
}

}  // namespace sumlab
