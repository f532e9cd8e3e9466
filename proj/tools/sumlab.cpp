#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumlab/catalog.hpp"
#include "sumlab/convergence.hpp"
#include "sumlab/counterexamples.hpp"
#include "sumlab/harness.hpp"
#include "sumlab/jsonio.hpp"
#include "sumlab/phi.hpp"

namespace {

using namespace sumlab;

struct GlobalOpts {
  std::string catalog_dir;
  double holds_threshold = 0.02;
  double fails_threshold = 0.2;
  int threads = 1;
};

Catalog load_catalog(const GlobalOpts& g) {
  Catalog cat = builtin_catalog();
  if (!g.catalog_dir.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir(g.catalog_dir);
    if (fs::exists(dir / "moduli.cat")) load_moduli(cat, read_file((dir / "moduli.cat").string()));
    if (fs::exists(dir / "thetas.cat")) load_thetas(cat, read_file((dir / "thetas.cat").string()));
    if (fs::exists(dir / "sequences.cat"))
      load_sequences(cat, read_file((dir / "sequences.cat").string()));
  }
  return cat;
}

VerdictPolicy make_policy(const GlobalOpts& g) {
  VerdictPolicy p;
  p.holds_threshold = g.holds_threshold;
  p.fails_threshold = g.fails_threshold;
  p.validate();
  return p;
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

const LacunaryTheta* optional_theta(const Catalog& cat, const std::string& name) {
  if (name.empty()) return nullptr;
  return &cat.theta(name);
}

int cmd_modulus_check(const Catalog& cat, const std::string& name, double grid_max,
                      std::size_t grid_points) {
  const auto rep = check_modulus_axioms(cat.modulus(name), grid_max, grid_points);
  ordered_json j;
  j["name"] = name;
  j["grid_max"] = round12(grid_max);
  auto put = [&](const char* key, const AxiomCheck& c) {
    ordered_json cj;
    cj["pass"] = c.pass;
    cj["detail"] = c.detail;
    j["axioms"][key] = std::move(cj);
  };
  put("vanishes_only_at_zero", rep.vanishes_only_at_zero);
  put("subadditive", rep.subadditive);
  put("increasing", rep.increasing);
  put("right_continuous_at_zero", rep.right_continuous_at_zero);
  put("unbounded", rep.unbounded);
  j["all_pass"] = rep.all_pass();
  emit(j);
  return 0;
}

int cmd_modulus_phi(const Catalog& cat, const std::string& name, double eps,
                    const std::string& theta, std::uint64_t horizon) {
  const auto est = phi_estimate(cat.modulus(name), eps, horizon, optional_theta(cat, theta));
  emit(phi_json(name, est));
  return 0;
}

int cmd_modulus_classify(const Catalog& cat, const std::string& name, const std::string& theta,
                         std::uint64_t horizon, std::vector<double> grid) {
  if (grid.empty()) grid = default_eps_grid();
  const auto res =
      classify_compatibility(cat.modulus(name), grid, horizon, optional_theta(cat, theta));
  ordered_json j;
  j["name"] = name;
  if (!theta.empty()) j["theta"] = theta;
  j["verdict"] = to_string(res.verdict);
  j["declared"] = to_string(res.declared);
  j["conflict"] = res.conflict;
  ordered_json ests = ordered_json::array();
  for (const auto& e : res.estimates) {
    ordered_json ej;
    ej["epsilon"] = round12(e.epsilon);
    ej["value"] = round12(e.value);
    ej["plateau"] = e.plateau;
    ests.push_back(std::move(ej));
  }
  j["estimates"] = std::move(ests);
  emit(j);
  return res.conflict ? 1 : 0;
}

int cmd_lacunary_info(const Catalog& cat, const std::string& theta, std::size_t blocks) {
  const auto& th = cat.theta(theta);
  std::size_t R = blocks;
  if (th.kind() == ThetaKind::explicit_list) R = std::min(R, th.blocks_available());
  const auto prof = th.ratio_profile(R);
  ordered_json j;
  j["theta"] = theta;
  j["blocks"] = prof.blocks;
  j["h_tail"] = round12(th.h(prof.blocks));
  j["liminf_est"] = round12(prof.liminf_est);
  j["limsup_est"] = round12(prof.limsup_est);
  j["unbounded_flag"] = prof.unbounded_flag;
  emit(j);
  return 0;
}

int cmd_density(const Catalog& cat, const GlobalOpts& g, const std::string& modulus,
                const std::string& set, const std::string& theta, std::uint64_t horizon) {
  const auto est = f_density(cat.modulus(modulus), cat.set(set), horizon,
                             optional_theta(cat, theta), make_policy(g));
  ordered_json j;
  j["modulus"] = modulus;
  j["set"] = set;
  if (!theta.empty()) j["theta"] = theta;
  j["horizon"] = horizon;
  j["value"] = round12(est.value);
  j["plateau"] = est.plateau;
  emit(j);
  return 0;
}

int cmd_converge(const Catalog& cat, const GlobalOpts& g, const std::string& seq_name,
                 const std::string& method, const std::string& modulus, const std::string& theta,
                 std::uint64_t horizon, std::optional<double> limit) {
  SequenceSpec seq = cat.sequence(seq_name);
  if (limit) seq.limit = *limit;
  const auto& f = cat.modulus(modulus);
  const auto* th = optional_theta(cat, theta);
  const auto policy = make_policy(g);
  Verdict v;
  if (method == "stat") v = test_statistical(seq, f, th, horizon, policy, g.threads);
  else if (method == "cesaro") v = test_strong_cesaro(seq, f, th, horizon, policy, g.threads);
  else throw Error(Errc::usage_error, "method must be stat or cesaro");
  ordered_json j;
  j["seq"] = seq_name;
  j["method"] = method;
  j["modulus"] = modulus;
  if (!theta.empty()) j["theta"] = theta;
  j["horizon"] = horizon;
  j["limit"] = round12(seq.limit);
  j["verdict"] = verdict_json(v, true);
  emit(j);
  return v.status == Status::fails ? 1 : 0;
}

int cmd_integrable(const Catalog& cat, const GlobalOpts& g, const std::string& seq_name,
                   const std::string& theta, const std::vector<double>& mgrid, std::size_t blocks,
                   bool unnormalized) {
  const auto rep = test_uniform_integrability(cat.sequence(seq_name), cat.theta(theta), mgrid,
                                              blocks, !unnormalized, make_policy(g));
  ordered_json j;
  j["seq"] = seq_name;
  j["theta"] = theta;
  j["normalized"] = rep.normalized;
  ordered_json vals = ordered_json::array();
  for (std::size_t i = 0; i < rep.m_grid.size(); ++i)
    vals.push_back({round12(rep.m_grid[i]), round12(rep.values[i])});
  j["per_m"] = std::move(vals);
  j["status"] = to_string(rep.verdict.status);
  emit(j);
  return rep.verdict.status == Status::fails ? 1 : 0;
}

int cmd_counterexample(const Catalog& cat, const std::string& kind, const std::string& modulus,
                       const std::string& theta, const std::string& epsk, std::size_t witnesses,
                       std::size_t ranges, double x0, const std::string& out) {
  const auto& th = cat.theta(theta);
  WitnessedSequence ws;
  if (kind == "reciproco" || kind == "th3") {
    const auto& f = cat.modulus(modulus);
    std::vector<double> eps =
        (epsk == "inv_pow2") ? eps_inv_pow2(witnesses + 19) : eps_inv_k(witnesses + 19);
    ws = (kind == "reciproco") ? build_reciproco_sequence(f, th, eps, witnesses)
                               : build_th3_sequence(f, th, eps, witnesses);
  } else if (kind == "sember") {
    ws = build_sember_gap_sequence(th, x0, ranges);
  } else {
    throw Error(Errc::usage_error, "kind must be reciproco, th3 or sember");
  }

  std::string csv;
  csv += "# kind," + kind + "\n";
  csv += "# witness_blocks";
  for (auto r : ws.witness_blocks) csv += "," + std::to_string(r);
  csv += "\n# witness_sizes";
  for (auto s : ws.witness_sizes) csv += "," + format12(s);
  csv += "\n# eps";
  for (auto e : ws.eps_seq) csv += "," + format12(e);
  csv += "\n# witness_ratios";
  for (auto r : ws.witness_ratios) csv += "," + format12(r);
  csv += "\n# separation_c," + format12(ws.separation_c) + "\n";
  csv += "n,x_n\n";
  const std::uint64_t last_support =
      ws.witness_blocks.empty()
          ? 1000
          : static_cast<std::uint64_t>(th.k(ws.witness_blocks.back())) + 8;
  std::uint64_t n = 1;
  while (n <= last_support) {
    csv += std::to_string(n) + "," + format12(ws.seq(n)) + "\n";
    n = std::max(n + 1, static_cast<std::uint64_t>(static_cast<double>(n) * 1.1));
  }
  write_file(out, csv);

  ordered_json j;
  j["kind"] = kind;
  j["theta"] = theta;
  if (kind != "sember") j["modulus"] = modulus;
  j["witness_blocks"] = ws.witness_blocks;
  ordered_json sizes = ordered_json::array();
  for (auto s : ws.witness_sizes) sizes.push_back(round12(s));
  j["witness_sizes"] = std::move(sizes);
  ordered_json ratios = ordered_json::array();
  for (auto r : ws.witness_ratios) ratios.push_back(round12(r));
  j["witness_ratios"] = std::move(ratios);
  j["separation_c"] = round12(ws.separation_c);
  j["out"] = out;
  emit(j);
  return 0;
}

int cmd_harness_run(const Catalog& cat, const GlobalOpts& g, const std::string& config_path,
                    const std::string& out_dir) {
  const auto config = parse_suite_config(read_file(config_path));
  const auto rep = run_suite(config, cat, make_policy(g), g.threads);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "report.json").string(), suite_report_json(rep).dump(2) + "\n");
  write_file((fs::path(out_dir) / "report.csv").string(), suite_report_csv(rep));
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    std::string csv = "component,scale,value\n";
    for (const auto& c : row.components)
      for (const auto& [s, v] : c.estimate.trajectory)
        csv += c.label + "," + format12(s) + "," + format12(v) + "\n";
    write_file((fs::path(out_dir) / ("traj_" + std::to_string(i) + "_" + to_string(row.law) +
                                     ".csv"))
                   .string(),
               csv);
  }

  ordered_json j;
  j["config"] = config_path;
  j["rows"] = rep.rows.size();
  j["consistent"] = rep.consistent;
  j["violated"] = rep.violated;
  j["inconclusive"] = rep.inconclusive;
  j["out"] = out_dir;
  emit(j);
  return rep.violated > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"summability laboratory"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--catalog", g.catalog_dir, "directory with moduli.cat/thetas.cat/sequences.cat");
  app.add_option("--holds-threshold", g.holds_threshold, "verdict Holds threshold");
  app.add_option("--fails-threshold", g.fails_threshold, "verdict Fails threshold");
  app.add_option("--threads", g.threads, "worker cap for block scans");

  // modulus
  auto* modulus = app.add_subcommand("modulus", "modulus function operations");
  modulus->require_subcommand(1);
  std::string m_name, m_theta;
  double m_gridmax = 1e6, m_eps = 0.1;
  std::size_t m_gridpoints = 1000;
  std::uint64_t m_horizon = 1000000;
  std::vector<double> m_grid;
  auto* mc = modulus->add_subcommand("check", "check the modulus axioms on a grid");
  mc->add_option("--name", m_name, "modulus id")->required();
  mc->add_option("--grid-max", m_gridmax, "largest grid point");
  mc->add_option("--grid-points", m_gridpoints, "grid size");
  auto* mp = modulus->add_subcommand("phi", "estimate the phi functional at one epsilon");
  mp->add_option("--name", m_name, "modulus id")->required();
  mp->add_option("--eps", m_eps, "epsilon")->required();
  mp->add_option("--theta", m_theta, "lacunary id for the block-length variant");
  mp->add_option("--horizon", m_horizon, "scan horizon");
  auto* mk = modulus->add_subcommand("classify", "classify compatibility along an eps grid");
  mk->add_option("--name", m_name, "modulus id")->required();
  mk->add_option("--theta", m_theta, "lacunary id");
  mk->add_option("--horizon", m_horizon, "scan horizon");
  mk->add_option("--eps-grid", m_grid, "decreasing eps grid")->delimiter(',');

  // lacunary
  auto* lac = app.add_subcommand("lacunary", "lacunary sequence interrogation");
  lac->require_subcommand(1);
  std::string l_theta;
  std::size_t l_blocks = 100;
  auto* li = lac->add_subcommand("info", "block ratio profile");
  li->add_option("--theta", l_theta, "lacunary id")->required();
  li->add_option("--blocks", l_blocks, "blocks to scan");

  // density
  std::string d_modulus = "identity", d_set, d_theta;
  std::uint64_t d_horizon = 1000000;
  auto* den = app.add_subcommand("density", "f-density of an integer set");
  den->add_option("--modulus", d_modulus, "modulus id");
  den->add_option("--set", d_set, "set id (evens, odds, squares, cubes, pow2)")->required();
  den->add_option("--theta", d_theta, "lacunary id");
  den->add_option("--horizon", d_horizon, "scan horizon");

  // converge
  std::string c_seq, c_method, c_modulus = "identity", c_theta;
  std::uint64_t c_horizon = 1000000;
  double c_limit = 0.0;
  bool c_limit_set = false;
  auto* con = app.add_subcommand("converge", "statistical / strong Cesaro verdicts");
  con->add_option("--seq", c_seq, "sequence id")->required();
  con->add_option("--method", c_method, "stat or cesaro")->required();
  con->add_option("--modulus", c_modulus, "modulus id");
  con->add_option("--theta", c_theta, "lacunary id");
  con->add_option("--horizon", c_horizon, "scan horizon");
  con->add_option("--limit", c_limit, "candidate limit override")->each([&](const std::string&) {
    c_limit_set = true;
  });

  // integrable
  std::string i_seq, i_theta;
  std::vector<double> i_mgrid;
  std::size_t i_blocks = 20;
  bool i_unnorm = false;
  auto* integ = app.add_subcommand("integrable", "lacunary uniform integrability report");
  integ->add_option("--seq", i_seq, "sequence id")->required();
  integ->add_option("--theta", i_theta, "lacunary id")->required();
  integ->add_option("--mgrid", i_mgrid, "increasing cutoffs")->required()->delimiter(',');
  integ->add_option("--blocks", i_blocks, "blocks to scan");
  integ->add_flag("--unnormalized", i_unnorm, "use the raw truncated block sum");

  // counterexample
  std::string x_kind, x_modulus = "identity", x_theta, x_epsk = "inv_k", x_out;
  std::size_t x_witnesses = 5, x_ranges = 4;
  double x_x0 = 1.0;
  auto* ce = app.add_subcommand("counterexample", "synthesize a separation sequence");
  ce->add_option("--kind", x_kind, "reciproco, th3 or sember")->required();
  ce->add_option("--modulus", x_modulus, "modulus id (reciproco/th3)");
  ce->add_option("--theta", x_theta, "lacunary id")->required();
  ce->add_option("--epsk", x_epsk, "eps schedule: inv_k or inv_pow2");
  ce->add_option("--witnesses", x_witnesses, "witness count K");
  ce->add_option("--ranges", x_ranges, "gap range count J (sember)");
  ce->add_option("--x0", x_x0, "gap amplitude (sember)");
  ce->add_option("--out", x_out, "CSV output path")->required();

  // harness
  auto* har = app.add_subcommand("harness", "theorem suite runner");
  har->require_subcommand(1);
  std::string h_config, h_out = "harness_out";
  auto* hr = har->add_subcommand("run", "evaluate a law/instance config");
  hr->add_option("--config", h_config, "config file")->required();
  hr->add_option("--out", h_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help() << "\n";
    return 2;
  }

  try {
    const Catalog cat = load_catalog(g);
    if (mc->parsed()) return cmd_modulus_check(cat, m_name, m_gridmax, m_gridpoints);
    if (mp->parsed()) return cmd_modulus_phi(cat, m_name, m_eps, m_theta, m_horizon);
    if (mk->parsed()) return cmd_modulus_classify(cat, m_name, m_theta, m_horizon, m_grid);
    if (li->parsed()) return cmd_lacunary_info(cat, l_theta, l_blocks);
    if (den->parsed()) return cmd_density(cat, g, d_modulus, d_set, d_theta, d_horizon);
    if (con->parsed())
      return cmd_converge(cat, g, c_seq, c_method, c_modulus, c_theta, c_horizon,
                          c_limit_set ? std::optional<double>(c_limit) : std::nullopt);
    if (integ->parsed())
      return cmd_integrable(cat, g, i_seq, i_theta, i_mgrid, i_blocks, i_unnorm);
    if (ce->parsed())
      return cmd_counterexample(cat, x_kind, x_modulus, x_theta, x_epsk, x_witnesses, x_ranges,
                                x_x0, x_out);
    if (hr->parsed()) return cmd_harness_run(cat, g, h_config, h_out);
    std::cerr << app.help() << "\n";
    return 2;
  } catch (const sumlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::usage_error ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
