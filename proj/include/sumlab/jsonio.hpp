#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumlab/convergence.hpp"
#include "sumlab/estimate.hpp"
#include "sumlab/harness.hpp"
#include "sumlab/phi.hpp"

namespace sumlab {

using ordered_json = nlohmann::ordered_json;

// All numeric output is pinned to 12 significant digits so identical argv
// yields byte-identical serializations.
inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline ordered_json estimate_json(const LimitEstimate& est, bool with_trajectory = false) {
  ordered_json j;
  j["value"] = round12(est.value);
  j["plateau"] = est.plateau;
  j["horizon"] = round12(est.horizon);
  if (with_trajectory) {
    ordered_json traj = ordered_json::array();
    for (const auto& [s, v] : est.trajectory) traj.push_back({round12(s), round12(v)});
    j["trajectory"] = std::move(traj);
  }
  return j;
}

inline ordered_json verdict_json(const Verdict& v, bool with_trajectory = false) {
  ordered_json j;
  j["status"] = to_string(v.status);
  ordered_json ev = ordered_json::array();
  for (const auto& item : v.evidence) {
    ordered_json e;
    e["label"] = item.label;
    e["status"] = to_string(item.status);
    e["estimate"] = estimate_json(item.estimate, with_trajectory);
    ev.push_back(std::move(e));
  }
  j["evidence"] = std::move(ev);
  return j;
}

inline ordered_json phi_json(const std::string& name, const PhiEstimate& est) {
  ordered_json j;
  j["name"] = name;
  j["epsilon"] = round12(est.epsilon);
  j["value"] = round12(est.value);
  j["plateau"] = est.plateau;
  j["mode"] = est.mode == PhiMode::global ? "global" : "lacunary";
  if (!est.theta_name.empty()) j["theta"] = est.theta_name;
  j["max_scale"] = round12(est.max_scale);
  return j;
}

inline ordered_json suite_row_json(const TheoremVerdict& tv) {
  ordered_json j;
  j["law"] = to_string(tv.law);
  j["modulus"] = tv.modulus;
  j["theta"] = tv.theta;
  j["seq"] = tv.seq;
  j["horizon"] = tv.horizon;
  j["outcome"] = to_string(tv.outcome);
  j["note"] = tv.note;
  ordered_json comps = ordered_json::array();
  for (const auto& c : tv.components) {
    ordered_json cj;
    cj["label"] = c.label;
    cj["status"] = to_string(c.status);
    cj["value"] = round12(c.value);
    comps.push_back(std::move(cj));
  }
  j["components"] = std::move(comps);
  return j;
}

inline ordered_json suite_report_json(const SuiteReport& rep) {
  ordered_json j;
  j["note"] =
      "per-instance finite-horizon checks: a Consistent table is evidence, not a proof";
  j["consistent"] = rep.consistent;
  j["violated"] = rep.violated;
  j["inconclusive"] = rep.inconclusive;
  ordered_json rows = ordered_json::array();
  for (const auto& row : rep.rows) rows.push_back(suite_row_json(row));
  j["rows"] = std::move(rows);
  return j;
}

inline std::string suite_report_csv(const SuiteReport& rep) {
  std::string out = "law,modulus,theta,seq,horizon,outcome,note\n";
  for (const auto& row : rep.rows) {
    std::string note = row.note;
    for (auto& ch : note)
      if (ch == ',') ch = ';';
    out += to_string(row.law) + "," + row.modulus + "," + row.theta + "," + row.seq + "," +
           std::to_string(row.horizon) + "," + to_string(row.outcome) + "," + note + "\n";
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::bad_config, "cannot write " + path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::bad_config, "cannot read " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

inline std::string format12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace sumlab
