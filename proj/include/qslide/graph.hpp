#pragma once

#include "qslide/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qslide {

// Undirected weighted coupling between two 1-based site indices, stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;
  Real coupling = 0.0;
};

// Site graph underlying the Hamiltonian. `regions` partitions 1..sites into
// named groups ("slide", "runway", "tree"); attach_site is the runway site the
// tree root couples to (0 when there is no runway), tree_root is the global
// index of the root (0 when there is no tree).
struct CouplingGraph {
  int sites = 0;
  std::vector<Edge> edges;
  std::map<std::string, std::vector<int>> regions;
  int attach_site = 0;
  int tree_root = 0;
};

// Coupling profile of the wave-packet shaper. main_text tapers to the bulk
// value at the runway end, supplement uses the symmetric half-parabola.
enum class SlideVariant { main_text, supplement };

// Balanced binary NAND tree of the given depth with 2^depth input bits.
// Bit value 1 hangs an extra leaf site below the corresponding layer-d node.
struct NandTreeSpec {
  int depth = 0;
  std::vector<int> inputs;

  NandTreeSpec(int depth, std::vector<int> bits);
  static NandTreeSpec from_inputs(const std::vector<int>& bits);

  int input_count() const { return static_cast<int>(inputs.size()); }
  int site_count() const;
};

CouplingGraph build_runway(int length, Real coupling);
CouplingGraph build_slide(int length, Real coupling,
                          SlideVariant variant = SlideVariant::main_text);
CouplingGraph build_nand_tree(const NandTreeSpec& spec, Real coupling);

// Concatenates slide - runway - tree into one graph with global indices
// (slide sites first, then runway, then tree in breadth-first order). The
// last slide site couples to the first runway site and the tree root couples
// to the runway attach site, both with strength `coupling`.
CouplingGraph assemble_system(const std::optional<CouplingGraph>& slide,
                              const CouplingGraph& runway,
                              const std::optional<CouplingGraph>& tree,
                              Real coupling);

// Checks structural invariants (index ranges, positive couplings, no
// duplicate edges, regions partition the sites). Throws std::logic_error.
void validate(const CouplingGraph& g);

// Sites of a named region, empty when the region is absent.
const std::vector<int>& region_sites(const CouplingGraph& g, const std::string& name);

// Region name per site, index 0 unused.
std::vector<std::string> site_region_names(const CouplingGraph& g);

// Degree per site, index 0 unused.
std::vector<int> site_degrees(const CouplingGraph& g);

bool is_connected(const CouplingGraph& g);

// Deterministic JSON rendering: fields sites, edges, regions, attach_site in
// that order, edges sorted by (a, b).
std::string graph_to_json(const CouplingGraph& g);

}  // namespace qslide
