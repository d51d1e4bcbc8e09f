#include "qslide/experiment.hpp"

#include "qslide/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qslide {

namespace {

struct Prepared {
  CouplingGraph graph;
  Hamiltonian h;
  ComplexVector projection;
  std::vector<int> left, right, center;  // global sites; attach and slide excluded
  int runway_offset = 0;
  int runway_length = 0;
  int attach = 0;
};

void check_config(const ExperimentConfig& cfg) {
  if (cfg.slide_length != 0 && cfg.slide_length < 2)
    throw std::invalid_argument("experiment: slide length must be 0 or at least 2");
  if (cfg.runway_length < 3 || cfg.runway_length % 2 == 0)
    throw std::invalid_argument("experiment: runway length must be odd and at least 3");
  if (!(cfg.coupling > 0.0)) throw std::invalid_argument("experiment: coupling must be positive");
  if (!(cfg.z_step > 0.0)) throw std::invalid_argument("experiment: z step must be positive");
  if (!(cfg.z_max >= 0.0)) throw std::invalid_argument("experiment: z max must be non-negative");
  if (cfg.hamiltonian_sign != 1 && cfg.hamiltonian_sign != -1)
    throw std::invalid_argument("experiment: hamiltonian sign must be +1 or -1");
  if (!cfg.packet && cfg.slide_length == 0)
    throw std::invalid_argument("experiment: without a slide a packet override is required");
}

Real resolve_width(const ExperimentConfig& cfg, const PacketOverride& packet) {
  if (packet.width) return *packet.width;
  if (packet.gamma) {
    if (!cfg.tree)
      throw std::invalid_argument("experiment: packet gamma needs a tree to set the scale");
    return *packet.gamma * std::sqrt(Real(cfg.tree->input_count()));
  }
  throw std::invalid_argument("experiment: packet override needs width or gamma");
}

Prepared prepare(const ExperimentConfig& cfg) {
  check_config(cfg);
  std::optional<CouplingGraph> slide;
  if (cfg.slide_length > 0)
    slide = build_slide(cfg.slide_length, cfg.coupling, cfg.slide_variant);
  CouplingGraph runway = build_runway(cfg.runway_length, cfg.coupling);
  std::optional<CouplingGraph> tree;
  if (cfg.tree) tree = build_nand_tree(*cfg.tree, cfg.coupling);
  CouplingGraph graph = assemble_system(slide, runway, tree, cfg.coupling);

  ComplexVector psi0 = ComplexVector::Zero(graph.sites);
  int offset = cfg.slide_length;
  if (cfg.packet) {
    ComplexVector local = gaussian_packet(cfg.runway_length, cfg.packet->center,
                                          resolve_width(cfg, *cfg.packet), cfg.hamiltonian_sign);
    psi0.segment(offset, cfg.runway_length) = local;
  } else {
    psi0(0) = 1.0;
  }

  Hamiltonian h(graph, cfg.hamiltonian_sign);
  ComplexVector projection = eigenbasis_projection(h, psi0);
  Prepared prep{std::move(graph), std::move(h),  std::move(projection), {}, {}, {},
                offset,           cfg.runway_length, 0};
  prep.attach = prep.graph.attach_site;
  for (int s : region_sites(prep.graph, "runway")) {
    if (s < prep.attach) prep.left.push_back(s);
    if (s > prep.attach) prep.right.push_back(s);
  }
  prep.center = region_sites(prep.graph, "tree");
  return prep;
}

RunRecord make_record(const Prepared& prep, Real z) {
  RunRecord rec;
  rec.z = z;
  rec.probabilities = site_probabilities(evolve_projected(prep.h, prep.projection, z));
  auto sum_over = [&](const std::vector<int>& sites) {
    Real acc = 0.0;
    for (int s : sites) acc += rec.probabilities(s - 1);
    return acc;
  };
  Real raw_left = sum_over(prep.left);
  Real raw_right = sum_over(prep.right);
  Real raw_center = sum_over(prep.center);
  rec.p_plus = raw_right;
  // below this the regions hold only numerical dust (the packet has not left
  // the slide yet) and renormalizing would amplify noise into O(1) shares
  constexpr Real kRegionFloor = 1e-12;
  Real norm = raw_left + raw_right + raw_center;
  if (norm > kRegionFloor) {
    rec.s_left = raw_left / norm;
    rec.s_right = raw_right / norm;
    rec.s_center = raw_center / norm;
    rec.s_left_center = rec.s_left + rec.s_center;
    rec.l_out = rec.s_right - rec.s_left_center;
  }
  return rec;
}

std::vector<Real> z_grid(Real z_max, Real z_step) {
  std::vector<Real> grid;
  long long n = static_cast<long long>(std::floor(z_max / z_step + 1e-9));
  for (long long i = 0; i <= n; ++i) grid.push_back(Real(i) * z_step);
  if (grid.back() < z_max - 1e-9 * std::max(Real(1), z_max)) grid.push_back(z_max);
  return grid;
}

// Readout window: packet center crosses the attach site at z_cross in free
// flight at band-center speed 2J, then one half left-runway length more.
struct ReadoutWindow {
  Real from = 0.0;
  Real to = 0.0;
};

ReadoutWindow readout_window(const ExperimentConfig& cfg) {
  if (!cfg.packet)
    throw std::invalid_argument("experiment: readout window needs a packet override");
  Real attach_local = Real(cfg.runway_length + 1) / 2.0;
  Real distance = attach_local - cfg.packet->center;
  if (!(distance > 0.0))
    throw std::invalid_argument("experiment: packet must start left of the attach site");
  Real speed = 2.0 * cfg.coupling;
  Real z_cross = distance / speed;
  Real extent = (attach_local - 1.0) / 2.0 / speed;
  return {z_cross, z_cross + extent};
}

Real best_readout(const Prepared& prep, const ReadoutWindow& window, Real* best_p = nullptr) {
  constexpr int kPoints = 64;
  Real best_z = window.from;
  Real best_score = -1.0;
  Real best_value = 0.0;
  for (int k = 0; k <= kPoints; ++k) {
    Real z = window.from + (window.to - window.from) * Real(k) / Real(kPoints);
    RunRecord rec = make_record(prep, z);
    Real score = std::abs(rec.p_plus - 0.5);
    if (score > best_score) {
      best_score = score;
      best_z = z;
      best_value = rec.p_plus;
    }
  }
  if (best_p) *best_p = best_value;
  return best_z;
}

}  // namespace

ExperimentResult run_nand_experiment(const ExperimentConfig& cfg) {
  Prepared prep = prepare(cfg);
  ExperimentResult result;
  result.records.reserve(64);
  for (Real z : z_grid(cfg.z_max, cfg.z_step)) result.records.push_back(make_record(prep, z));
  if (cfg.tree) result.verdict = result.records.back().l_out > 0.0 ? 1 : 0;
  result.system = std::move(prep.graph);
  return result;
}

VelocityFit measure_velocity(const ExperimentConfig& cfg, Real z_from, Real z_to) {
  if (cfg.tree)
    throw std::invalid_argument("measure_velocity: needs a tree-free system");
  if (!(z_from >= 0.0) || !(z_to > z_from))
    throw std::invalid_argument("measure_velocity: need 0 <= z_from < z_to");
  Prepared prep = prepare(cfg);
  VelocityFit fit;
  std::vector<Real> zs, mus;
  for (Real z = z_from; z <= z_to + 1e-9; z += cfg.z_step) {
    RunRecord rec = make_record(prep, z);
    RealVector runway =
        rec.probabilities.segment(prep.runway_offset, prep.runway_length);
    Real mass = runway.sum();
    if (!(mass > 0.0))
      throw std::runtime_error("measure_velocity: no probability on the runway at z = " +
                               std::to_string(z));
    runway /= mass;
    int n = prep.runway_length;
    if (runway(0) + runway(1) + runway(n - 2) + runway(n - 1) > 2e-3)
      fit.boundary_contact = true;
    zs.push_back(z);
    mus.push_back(fit_packet(runway).center);
  }
  fit.points = static_cast<int>(zs.size());
  if (fit.points < 2)
    throw std::invalid_argument("measure_velocity: window holds fewer than two grid points");
  Real zm = 0.0, mm = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    zm += zs[i];
    mm += mus[i];
  }
  zm /= fit.points;
  mm /= fit.points;
  Real num = 0.0, den = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    num += (zs[i] - zm) * (mus[i] - mm);
    den += (zs[i] - zm) * (zs[i] - zm);
  }
  fit.slope = num / den;
  return fit;
}

Real p_plus_expectation(const ExperimentConfig& cfg, Real z) {
  Prepared prep = prepare(cfg);
  return make_record(prep, z).p_plus;
}

Real optimal_readout_z(const ExperimentConfig& cfg) {
  Prepared prep = prepare(cfg);
  return best_readout(prep, readout_window(cfg));
}

SweepResult error_rate_sweep(int left_length, const std::vector<Real>& widths,
                             const std::vector<int>& inputs) {
  if (left_length < 2)
    throw std::invalid_argument("error_rate_sweep: left length must be at least 2");
  if (widths.empty()) throw std::invalid_argument("error_rate_sweep: no widths given");
  ExperimentConfig cfg;
  cfg.slide_length = 0;
  cfg.runway_length = 2 * left_length + 1;
  cfg.coupling = 1.0;
  cfg.tree = NandTreeSpec::from_inputs(inputs);
  cfg.packet = PacketOverride{Real(left_length) / 2.0, widths.front(), std::nullopt};
  int target = nand_eval(inputs);

  Prepared prep = prepare(cfg);
  ReadoutWindow window = readout_window(cfg);
  SweepResult result;
  Real best_error = 0.0;
  for (Real width : widths) {
    if (!(width > 0.0)) throw std::invalid_argument("error_rate_sweep: widths must be positive");
    ComplexVector psi0 = ComplexVector::Zero(prep.graph.sites);
    psi0.segment(prep.runway_offset, prep.runway_length) =
        gaussian_packet(cfg.runway_length, cfg.packet->center, width, cfg.hamiltonian_sign);
    prep.projection = eigenbasis_projection(prep.h, psi0);
    Real p = 0.0;
    Real z = best_readout(prep, window, &p);
    Real error = std::abs(Real(target) - p);
    result.points.push_back({width, error, z});
    if (result.points.size() == 1 || error < best_error) {
      best_error = error;
      result.argmin_width = width;
    }
  }
  return result;
}

namespace {

std::string canonical_bits(const std::vector<int>& bits, size_t lo, size_t hi) {
  if (hi - lo == 1) return bits[lo] ? "1" : "0";
  size_t mid = lo + (hi - lo) / 2;
  std::string l = canonical_bits(bits, lo, mid);
  std::string r = canonical_bits(bits, mid, hi);
  if (r < l) std::swap(l, r);
  return l + r;
}

}  // namespace

std::string input_class_label(const std::vector<int>& inputs) {
  NandTreeSpec spec = NandTreeSpec::from_inputs(inputs);  // validates shape
  std::string flat = canonical_bits(spec.inputs, 0, spec.inputs.size());
  if (flat.size() <= 2) return flat;
  return flat.substr(0, flat.size() / 2) + "|" + flat.substr(flat.size() / 2);
}

}  // namespace qslide
