#include "qslide/config.hpp"
#include "qslide/dynamics.hpp"
#include "qslide/experiment.hpp"
#include "qslide/graph.hpp"
#include "qslide/io.hpp"
#include "qslide/scattering.hpp"
#include "qslide/slide.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using qslide::ConfigError;
using qslide::ExperimentConfig;
using qslide::KeyValueConfig;
using qslide::NandTreeSpec;
using qslide::Real;

// Typed config access that records every value it hands out, so the manifest
// can echo the fully resolved parameter set. Rejects keys outside the
// subcommand's vocabulary.
struct Params {
  KeyValueConfig cfg;
  std::map<std::string, std::string> resolved;

  Params(KeyValueConfig c, const std::vector<std::string>& known) : cfg(std::move(c)) {
    for (const auto& [key, entry] : cfg.entries())
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw ConfigError(entry.origin + ": unknown key '" + key + "'");
  }

  bool has(const std::string& key) const { return cfg.has(key); }

  long long get_int(const std::string& key) {
    long long v = cfg.get_int(key);
    resolved[key] = std::to_string(v);
    return v;
  }
  long long get_int(const std::string& key, long long fallback) {
    long long v = cfg.get_int(key, fallback);
    resolved[key] = std::to_string(v);
    return v;
  }
  Real get_real(const std::string& key) {
    Real v = cfg.get_real(key);
    resolved[key] = qslide::format_double(v);
    return v;
  }
  Real get_real(const std::string& key, Real fallback) {
    Real v = cfg.get_real(key, fallback);
    resolved[key] = qslide::format_double(v);
    return v;
  }
  std::string get_string(const std::string& key, const std::string& fallback) {
    std::string v = cfg.get_string(key, fallback);
    resolved[key] = v;
    return v;
  }
  std::vector<int> get_bits(const std::string& key) {
    std::vector<int> bits = cfg.get_bits(key);
    std::string s;
    for (int b : bits) s += char('0' + b);
    resolved[key] = s;
    return bits;
  }
  std::vector<Real> get_real_list(const std::string& key, const std::string& fallback) {
    if (!cfg.has(key)) {
      KeyValueConfig tmp;
      tmp.apply_override(key + "=" + fallback);
      resolved[key] = fallback;
      return tmp.get_real_list(key);
    }
    std::vector<Real> v = cfg.get_real_list(key);
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + qslide::format_double(v[i]);
    resolved[key] = s;
    return v;
  }
  std::vector<int> get_int_list(const std::string& key, const std::string& fallback) {
    if (!cfg.has(key)) {
      KeyValueConfig tmp;
      tmp.apply_override(key + "=" + fallback);
      resolved[key] = fallback;
      return tmp.get_int_list(key);
    }
    std::vector<int> v = cfg.get_int_list(key);
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    resolved[key] = s;
    return v;
  }
};

std::string bits_to_string(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s += char('0' + b);
  return s;
}

void write_manifest(const std::string& outdir, const std::string& subcommand,
                    const Params& params) {
  nlohmann::ordered_json j;
  j["subcommand"] = subcommand;
  auto p = nlohmann::ordered_json::object();
  for (const auto& [key, value] : params.resolved) p[key] = value;
  j["parameters"] = std::move(p);
  qslide::write_file_atomic(outdir + "/manifest.json", j.dump(2) + "\n");
}

// Geometry and packet keys shared by simulate, truth-table and export-graph.
const std::vector<std::string> kExperimentKeys = {
    "l_qs",          "l_rw",        "j_mm_inv",     "slide_variant",
    "tree_depth",    "inputs",      "z_max_mm",     "z_step_mm",
    "packet_center", "packet_width", "packet_gamma", "hamiltonian_sign"};

ExperimentConfig load_experiment(Params& p, bool with_inputs) {
  ExperimentConfig cfg;
  cfg.slide_length = static_cast<int>(p.get_int("l_qs", 20));
  cfg.runway_length = static_cast<int>(p.get_int("l_rw"));
  cfg.coupling = p.get_real("j_mm_inv", 0.48);
  cfg.slide_variant = qslide::parse_slide_variant(p.get_string("slide_variant", "main_text"));
  cfg.z_max = p.get_real("z_max_mm", 72.0);
  cfg.z_step = p.get_real("z_step_mm", 1.0);
  cfg.hamiltonian_sign = static_cast<int>(p.get_int("hamiltonian_sign", -1));
  if (with_inputs && p.has("inputs")) {
    NandTreeSpec spec = NandTreeSpec::from_inputs(p.get_bits("inputs"));
    if (p.has("tree_depth") && p.get_int("tree_depth") != spec.depth)
      throw ConfigError("tree_depth disagrees with the number of input bits");
    cfg.tree = spec;
  } else if (with_inputs && p.has("tree_depth")) {
    throw ConfigError("tree_depth given without inputs");
  }
  if (p.has("packet_center")) {
    qslide::PacketOverride packet;
    packet.center = p.get_real("packet_center");
    if (p.has("packet_width")) packet.width = p.get_real("packet_width");
    if (p.has("packet_gamma")) packet.gamma = p.get_real("packet_gamma");
    cfg.packet = packet;
  }
  return cfg;
}

std::string run_csv(const std::string& bits, const std::vector<qslide::RunRecord>& records) {
  std::ostringstream out;
  out << "inputs_bits,z_mm,S_L,S_C,S_R,S_LC,L_out,P_plus\n";
  for (const auto& rec : records)
    out << bits << ',' << qslide::format_double(rec.z) << ','
        << qslide::format_double(rec.s_left) << ',' << qslide::format_double(rec.s_center) << ','
        << qslide::format_double(rec.s_right) << ',' << qslide::format_double(rec.s_left_center)
        << ',' << qslide::format_double(rec.l_out) << ',' << qslide::format_double(rec.p_plus)
        << '\n';
  return out.str();
}

int run_simulate(Params& p, const std::string& outdir) {
  ExperimentConfig cfg = load_experiment(p, true);
  qslide::ExperimentResult result = qslide::run_nand_experiment(cfg);

  std::string bits = cfg.tree ? bits_to_string(cfg.tree->inputs) : "";
  qslide::write_file_atomic(outdir + "/graph.json", qslide::graph_to_json(result.system));
  qslide::write_file_atomic(outdir + "/run.csv", run_csv(bits, result.records));

  nlohmann::ordered_json summary;
  summary["inputs"] = bits;
  bool agree = true;
  if (cfg.tree) {
    int oracle = qslide::nand_eval(cfg.tree->inputs);
    Real t0 = std::norm(qslide::transmission_at_energy(*cfg.tree, 0.0).t);
    agree = *result.verdict == oracle;
    summary["verdict"] = *result.verdict;
    summary["nand_oracle"] = oracle;
    summary["T0_abs2"] = t0;
    summary["agree"] = agree;
  } else {
    summary["verdict"] = nullptr;
    summary["nand_oracle"] = nullptr;
    summary["T0_abs2"] = nullptr;
    summary["agree"] = nullptr;
  }
  qslide::write_file_atomic(outdir + "/summary.json", summary.dump(2) + "\n");
  write_manifest(outdir, "simulate", p);
  if (!agree) {
    std::cerr << "simulate: dynamical verdict disagrees with the gate oracle for inputs " << bits
              << "\n";
    return 1;
  }
  return 0;
}

int run_truth_table(Params& p, const std::string& outdir, bool flip_oracle) {
  int depth = static_cast<int>(p.get_int("tree_depth"));
  ExperimentConfig cfg = load_experiment(p, false);
  if (depth < 1 || depth > 6) throw ConfigError("tree_depth must be in [1, 6]");
  int n = 1 << depth;

  std::ostringstream csv;
  csv << "inputs,class,verdict,nand_oracle,agree,l_out,t0_abs2\n";
  bool all_agree = true;
  Real min_abs_l_out = 2.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> bits(n);
    for (int i = 0; i < n; ++i) bits[i] = (mask >> (n - 1 - i)) & 1;
    cfg.tree = NandTreeSpec(depth, bits);
    qslide::ExperimentResult result = qslide::run_nand_experiment(cfg);
    int oracle = qslide::nand_eval(bits);
    if (flip_oracle) oracle = 1 - oracle;
    Real t0 = std::norm(qslide::transmission_at_energy(*cfg.tree, 0.0).t);
    Real l_out = result.records.back().l_out;
    bool agree = *result.verdict == oracle;
    all_agree = all_agree && agree;
    min_abs_l_out = std::min(min_abs_l_out, std::abs(l_out));
    csv << bits_to_string(bits) << ',' << qslide::input_class_label(bits) << ','
        << *result.verdict << ',' << oracle << ',' << (agree ? 1 : 0) << ','
        << qslide::format_double(l_out) << ',' << qslide::format_double(t0) << '\n';
  }
  qslide::write_file_atomic(outdir + "/truth_table.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["rows"] = 1 << n;
  summary["all_agree"] = all_agree;
  summary["min_abs_l_out"] = min_abs_l_out;
  qslide::write_file_atomic(outdir + "/summary.json", summary.dump(2) + "\n");
  write_manifest(outdir, "truth-table", p);
  if (!all_agree) {
    std::cerr << "truth-table: at least one dynamical verdict disagrees with the gate oracle\n";
    return 1;
  }
  return 0;
}

int run_scatter(Params& p, const std::string& outdir) {
  NandTreeSpec spec = NandTreeSpec::from_inputs(p.get_bits("inputs"));
  Real theta_min = p.get_real("theta_min", 0.1);
  Real theta_max = p.get_real("theta_max", M_PI - 0.1);
  long long count = p.get_int("theta_count", 59);
  if (count < 2) throw ConfigError("theta_count must be at least 2");
  if (!(theta_min > 0.0) || !(theta_max < M_PI) || !(theta_min < theta_max))
    throw ConfigError("need 0 < theta_min < theta_max < pi");

  std::string bits = bits_to_string(spec.inputs);
  std::ostringstream csv;
  csv << "inputs,E,theta,re_T,im_T,abs_T2,abs_R2,verdict\n";
  for (long long k = 0; k < count; ++k) {
    Real theta = theta_min + (theta_max - theta_min) * Real(k) / Real(count - 1);
    qslide::ScatteringResult res = qslide::transmission(spec, theta);
    Real t2 = std::norm(res.t);
    csv << bits << ',' << qslide::format_double(res.energy) << ','
        << qslide::format_double(res.theta) << ',' << qslide::format_double(res.t.real()) << ','
        << qslide::format_double(res.t.imag()) << ',' << qslide::format_double(t2) << ','
        << qslide::format_double(std::norm(res.r)) << ',' << (t2 > 0.5 ? 1 : 0) << '\n';
  }
  qslide::write_file_atomic(outdir + "/scatter.csv", csv.str());
  write_manifest(outdir, "scatter", p);
  return 0;
}

int run_slide_check(Params& p, const std::string& outdir) {
  ExperimentConfig cfg;
  cfg.slide_length = static_cast<int>(p.get_int("l_qs", 20));
  cfg.runway_length = static_cast<int>(p.get_int("l_rw"));
  cfg.coupling = p.get_real("j_mm_inv", 0.48);
  cfg.slide_variant = qslide::parse_slide_variant(p.get_string("slide_variant", "main_text"));
  cfg.z_step = p.get_real("z_step_mm", 1.0);
  cfg.hamiltonian_sign = static_cast<int>(p.get_int("hamiltonian_sign", -1));
  if (cfg.slide_length < 2) throw ConfigError("slide-check needs l_qs >= 2");
  std::vector<Real> profile_z = p.get_real_list("profile_z_mm", "15,30,45");
  Real vel_from = p.get_real("velocity_z_from_mm", 44.0);
  Real vel_to = p.get_real("velocity_z_to_mm", 52.0);
  std::vector<int> pst_lengths = p.get_int_list("pst_lengths", "2,4,10,20,30");
  Real pst_tol = p.get_real("pst_tol", 1e-9);

  qslide::CouplingGraph graph = qslide::assemble_system(
      qslide::build_slide(cfg.slide_length, cfg.coupling, cfg.slide_variant),
      qslide::build_runway(cfg.runway_length, cfg.coupling), std::nullopt, cfg.coupling);
  qslide::Hamiltonian h(graph, cfg.hamiltonian_sign);
  qslide::ComplexVector psi0 = qslide::ComplexVector::Zero(graph.sites);
  psi0(0) = 1.0;
  qslide::ComplexVector proj = qslide::eigenbasis_projection(h, psi0);

  for (Real z : profile_z) {
    std::ostringstream out;
    qslide::write_state_csv(out, graph, qslide::evolve_projected(h, proj, z));
    qslide::write_file_atomic(outdir + "/profile_z" + qslide::format_double(z) + "mm.csv",
                              out.str());
  }

  qslide::PacketParams params = qslide::packet_params(cfg.slide_length, cfg.coupling);
  qslide::VelocityFit velocity = qslide::measure_velocity(cfg, vel_from, vel_to);

  // First grid distance with at least 99% of the probability on the runway,
  // then a width fit over the runway profile there.
  Real entry_z = -1.0;
  Real sigma_hat = 0.0;
  Real z_limit = Real(cfg.slide_length + cfg.runway_length) / cfg.coupling;
  for (Real z = 0.0; z <= z_limit; z += cfg.z_step) {
    qslide::RealVector probs =
        qslide::site_probabilities(qslide::evolve_projected(h, proj, z));
    qslide::RealVector runway = probs.segment(cfg.slide_length, cfg.runway_length);
    if (runway.sum() >= 0.99) {
      entry_z = z;
      sigma_hat = qslide::fit_packet(runway).width;
      break;
    }
  }
  if (entry_z < 0.0)
    throw std::runtime_error("slide-check: packet never cleared the slide; runway too short?");

  std::ostringstream pst_csv;
  pst_csv << "length,fidelity,ok\n";
  bool pst_all_ok = true;
  Real max_infidelity = 0.0;
  nlohmann::ordered_json pst_rows = nlohmann::ordered_json::array();
  for (int length : pst_lengths) {
    Real fid = qslide::verify_pst(length, 1.0);
    bool ok = fid >= 1.0 - pst_tol;
    pst_all_ok = pst_all_ok && ok;
    max_infidelity = std::max(max_infidelity, 1.0 - fid);
    pst_csv << length << ',' << qslide::format_double(fid) << ',' << (ok ? 1 : 0) << '\n';
    pst_rows.push_back({{"length", length}, {"fidelity", fid}, {"ok", ok}});
  }
  qslide::write_file_atomic(outdir + "/pst.csv", pst_csv.str());

  nlohmann::ordered_json summary;
  summary["packet"] = {{"center", params.center},
                       {"width", params.width()},
                       {"velocity_sites_per_mm", params.velocity}};
  summary["velocity_fit"] = {{"slope", velocity.slope},
                             {"boundary_contact", velocity.boundary_contact},
                             {"points", velocity.points}};
  summary["width_fit"] = {{"entry_z_mm", entry_z}, {"sigma_hat", sigma_hat}};
  summary["pst"] = std::move(pst_rows);
  summary["pst_max_infidelity"] = max_infidelity;
  qslide::write_file_atomic(outdir + "/summary.json", summary.dump(2) + "\n");
  write_manifest(outdir, "slide-check", p);
  if (!pst_all_ok) {
    std::cerr << "slide-check: end-to-end transfer fidelity fell below tolerance\n";
    return 1;
  }
  return 0;
}

int run_sweep(Params& p, const std::string& outdir) {
  int l_half = static_cast<int>(p.get_int("l_half"));
  std::vector<Real> sigmas = p.cfg.get_real_list("sigma_values");
  {
    std::string s;
    for (size_t i = 0; i < sigmas.size(); ++i)
      s += (i ? "," : "") + qslide::format_double(sigmas[i]);
    p.resolved["sigma_values"] = s;
  }
  std::vector<int> inputs = p.get_bits("inputs");

  qslide::SweepResult result = qslide::error_rate_sweep(l_half, sigmas, inputs);
  std::ostringstream csv;
  csv << "sigma,error,readout_z\n";
  Real min_error = 2.0;
  for (const auto& pt : result.points) {
    csv << qslide::format_double(pt.width) << ',' << qslide::format_double(pt.error) << ','
        << qslide::format_double(pt.readout_z) << '\n';
    min_error = std::min(min_error, pt.error);
  }
  qslide::write_file_atomic(outdir + "/sweep.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["argmin_sigma"] = result.argmin_width;
  summary["min_error"] = min_error;
  summary["nand_oracle"] = qslide::nand_eval(inputs);
  qslide::write_file_atomic(outdir + "/summary.json", summary.dump(2) + "\n");
  write_manifest(outdir, "sweep", p);
  return 0;
}

int run_export_graph(Params& p, const std::string& outdir) {
  ExperimentConfig cfg = load_experiment(p, true);
  std::optional<qslide::CouplingGraph> slide;
  if (cfg.slide_length > 0)
    slide = qslide::build_slide(cfg.slide_length, cfg.coupling, cfg.slide_variant);
  std::optional<qslide::CouplingGraph> tree;
  if (cfg.tree) tree = qslide::build_nand_tree(*cfg.tree, cfg.coupling);
  qslide::CouplingGraph graph = qslide::assemble_system(
      slide, qslide::build_runway(cfg.runway_length, cfg.coupling), tree, cfg.coupling);
  qslide::write_file_atomic(outdir + "/graph.json", qslide::graph_to_json(graph));
  write_manifest(outdir, "export-graph", p);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-walk NAND tree simulator and scattering toolkit"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd = nullptr;
    std::string config;
    std::string out = ".";
    std::vector<std::string> overrides;
  };
  auto add_sub = [&](const std::string& name, const std::string& desc) {
    auto s = std::make_shared<Sub>();
    s->cmd = app.add_subcommand(name, desc);
    s->cmd->add_option("config", s->config, "flat key = value config file")->required();
    s->cmd->add_option("-o,--out", s->out, "output directory (default: current)");
    s->cmd->add_option("overrides", s->overrides, "trailing key=value overrides");
    return s;
  };

  auto sim = add_sub("simulate", "propagate one packet and log region sums over z");
  auto tt = add_sub("truth-table", "run every input vector of a given tree depth");
  bool flip_oracle = false;
  tt->cmd->add_flag("--flip-oracle", flip_oracle)->group("");
  auto scatter = add_sub("scatter", "closed-form transmission across a theta grid");
  auto slide_check = add_sub("slide-check", "packet shape, speed and transfer diagnostics");
  auto sweep = add_sub("sweep", "readout error versus packet width");
  auto export_graph = add_sub("export-graph", "write the coupling graph as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    auto load = [](const Sub& s, const std::vector<std::string>& known) {
      KeyValueConfig cfg = KeyValueConfig::parse_file(s.config);
      for (const std::string& o : s.overrides) cfg.apply_override(o);
      std::filesystem::create_directories(s.out);
      return Params(std::move(cfg), known);
    };

    if (sim->cmd->parsed()) {
      Params p = load(*sim, kExperimentKeys);
      return run_simulate(p, sim->out);
    }
    if (tt->cmd->parsed()) {
      std::vector<std::string> keys;
      for (const std::string& k : kExperimentKeys)
        if (k != "inputs") keys.push_back(k);
      Params p = load(*tt, keys);
      return run_truth_table(p, tt->out, flip_oracle);
    }
    if (scatter->cmd->parsed()) {
      Params p = load(*scatter, {"inputs", "theta_min", "theta_max", "theta_count"});
      return run_scatter(p, scatter->out);
    }
    if (slide_check->cmd->parsed()) {
      Params p = load(*slide_check,
                      {"l_qs", "l_rw", "j_mm_inv", "slide_variant", "z_step_mm", "profile_z_mm",
                       "velocity_z_from_mm", "velocity_z_to_mm", "pst_lengths", "pst_tol",
                       "hamiltonian_sign"});
      return run_slide_check(p, slide_check->out);
    }
    if (sweep->cmd->parsed()) {
      Params p = load(*sweep, {"l_half", "sigma_values", "inputs"});
      return run_sweep(p, sweep->out);
    }
    if (export_graph->cmd->parsed()) {
      Params p = load(*export_graph, kExperimentKeys);
      return run_export_graph(p, export_graph->out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
