#pragma once

#include "qslide/dynamics.hpp"
#include "qslide/graph.hpp"
#include "qslide/slide.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qslide {

// Analytic Gaussian launched on the runway instead of a slide-prepared
// packet. `center` is a runway-local site position; the width comes either
// directly or as gamma * sqrt(input count) when a tree is configured.
struct PacketOverride {
  Real center = 0.0;
  std::optional<Real> width;
  std::optional<Real> gamma;
};

struct ExperimentConfig {
  int slide_length = 20;  // 0 removes the slide; a packet override is then required
  int runway_length = 31;
  Real coupling = 0.48;  // per mm
  SlideVariant slide_variant = SlideVariant::main_text;
  std::optional<NandTreeSpec> tree;
  Real z_max = 72.0;  // mm
  Real z_step = 1.0;  // mm
  std::optional<PacketOverride> packet;
  int hamiltonian_sign = -1;
};

// Snapshot at one propagation distance. Region sums cover runway sites left
// and right of the attach site and the tree interior; the attach site and the
// slide are excluded, and s_* are renormalized so s_right + s_left_center = 1.
// While all probability still sits on the slide the sums are reported as 0.
// p_plus is the raw (unrenormalized) probability right of the attach site.
struct RunRecord {
  Real z = 0.0;
  RealVector probabilities;
  Real s_left = 0.0;
  Real s_center = 0.0;
  Real s_right = 0.0;
  Real s_left_center = 0.0;
  Real l_out = 0.0;  // s_right - s_left_center
  Real p_plus = 0.0;
};

struct ExperimentResult {
  CouplingGraph system;
  std::vector<RunRecord> records;
  std::optional<int> verdict;  // l_out > 0 at the final distance; absent without a tree
};

// Propagates the packet across the z grid (0, z_step, ..., z_max) and logs
// region sums at every step.
ExperimentResult run_nand_experiment(const ExperimentConfig& cfg);

// Least-squares slope of the fitted packet center against z over
// [z_from, z_to] on the runway, in sites per mm. boundary_contact reports
// probability piling up on the outermost two runway sites inside the window,
// which invalidates the fit.
struct VelocityFit {
  Real slope = 0.0;
  bool boundary_contact = false;
  int points = 0;
};

VelocityFit measure_velocity(const ExperimentConfig& cfg, Real z_from, Real z_to);

Real p_plus_expectation(const ExperimentConfig& cfg, Real z);

// Readout distance maximizing |p_plus - 1/2| over one attach-crossing
// window: from the free-flight arrival of the packet center at the attach
// site to half the left runway length later. Needs a packet override.
Real optimal_readout_z(const ExperimentConfig& cfg);

struct SweepPoint {
  Real width = 0.0;
  Real error = 0.0;     // |nand result - p_plus at the chosen readout|
  Real readout_z = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  Real argmin_width = 0.0;
};

// Readout error as a function of packet width on a runway of
// 2 * left_length + 1 sites at unit coupling, packet centered at
// left_length / 2. One Hamiltonian serves all widths.
SweepResult error_rate_sweep(int left_length, const std::vector<Real>& widths,
                             const std::vector<int>& inputs);

// Canonical label of the input vector under gate-argument swaps at every
// level, e.g. depth 2 collapses the 16 inputs to 00|00, 00|01, 00|11, 01|01,
// 01|11, 11|11.
std::string input_class_label(const std::vector<int>& inputs);

}  // namespace qslide
