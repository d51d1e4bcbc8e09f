#include "qslide/graph.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qslide {

namespace {

std::vector<int> iota_sites(int first, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = first + i;
  return v;
}

}  // namespace

NandTreeSpec::NandTreeSpec(int depth, std::vector<int> bits) : depth(depth), inputs(std::move(bits)) {
  if (depth < 1 || depth > 20)
    throw std::invalid_argument("NandTreeSpec: depth must be in [1, 20], got " + std::to_string(depth));
  if (inputs.size() != (size_t{1} << depth))
    throw std::invalid_argument("NandTreeSpec: expected " + std::to_string(size_t{1} << depth) +
                                " input bits for depth " + std::to_string(depth) + ", got " +
                                std::to_string(inputs.size()));
  for (int b : inputs)
    if (b != 0 && b != 1)
      throw std::invalid_argument("NandTreeSpec: input bits must be 0 or 1");
}

NandTreeSpec NandTreeSpec::from_inputs(const std::vector<int>& bits) {
  size_t n = bits.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("NandTreeSpec: input count must be a power of two >= 2, got " +
                                std::to_string(n));
  int depth = 0;
  while ((size_t{1} << depth) < n) ++depth;
  return NandTreeSpec(depth, bits);
}

int NandTreeSpec::site_count() const {
  int ones = 0;
  for (int b : inputs) ones += b;
  return (2 << depth) - 1 + ones;
}

CouplingGraph build_runway(int length, Real coupling) {
  if (length < 1 || length % 2 == 0)
    throw std::invalid_argument("build_runway: length must be odd and positive, got " +
                                std::to_string(length));
  if (!(coupling > 0.0))
    throw std::invalid_argument("build_runway: coupling must be positive");
  CouplingGraph g;
  g.sites = length;
  for (int r = 1; r < length; ++r) g.edges.push_back({r, r + 1, coupling});
  g.regions["runway"] = iota_sites(1, length);
  g.attach_site = (length + 1) / 2;
  validate(g);
  return g;
}

CouplingGraph build_slide(int length, Real coupling, SlideVariant variant) {
  if (length < 2)
    throw std::invalid_argument("build_slide: length must be at least 2, got " +
                                std::to_string(length));
  if (!(coupling > 0.0))
    throw std::invalid_argument("build_slide: coupling must be positive");
  CouplingGraph g;
  g.sites = length;
  for (int r = 1; r < length; ++r) {
    Real j = 0.0;
    if (variant == SlideVariant::main_text)
      j = coupling * std::sqrt(Real(r) * Real(2 * length - 2 - r)) / Real(length - 1);
    else
      j = coupling / Real(length) * std::sqrt(Real(r) * Real(2 * length - r));
    g.edges.push_back({r, r + 1, j});
  }
  g.regions["slide"] = iota_sites(1, length);
  validate(g);
  return g;
}

CouplingGraph build_nand_tree(const NandTreeSpec& spec, Real coupling) {
  if (!(coupling > 0.0))
    throw std::invalid_argument("build_nand_tree: coupling must be positive");
  CouplingGraph g;
  int internal = (2 << spec.depth) - 1;  // full binary tree in level order, root = 1
  g.sites = spec.site_count();
  for (int k = 1; k <= internal / 2; ++k) {
    g.edges.push_back({k, 2 * k, coupling});
    g.edges.push_back({k, 2 * k + 1, coupling});
  }
  int next_leaf = internal + 1;
  int first_bottom = 1 << spec.depth;
  for (int i = 0; i < spec.input_count(); ++i)
    if (spec.inputs[i] == 1) g.edges.push_back({first_bottom + i, next_leaf++, coupling});
  std::sort(g.edges.begin(), g.edges.end(),
            [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  g.regions["tree"] = iota_sites(1, g.sites);
  g.tree_root = 1;
  validate(g);
  return g;
}

CouplingGraph assemble_system(const std::optional<CouplingGraph>& slide,
                              const CouplingGraph& runway,
                              const std::optional<CouplingGraph>& tree,
                              Real coupling) {
  if (!(coupling > 0.0))
    throw std::invalid_argument("assemble_system: coupling must be positive");
  validate(runway);
  if (slide) validate(*slide);
  if (tree) validate(*tree);
  if (runway.attach_site == 0)
    throw std::invalid_argument("assemble_system: runway component has no attach site");

  CouplingGraph g;
  int offset = 0;
  auto append = [&](const CouplingGraph& part, const std::string& region) {
    for (const Edge& e : part.edges) g.edges.push_back({e.a + offset, e.b + offset, e.coupling});
    auto& sites = g.regions[region];
    for (int s = 1; s <= part.sites; ++s) sites.push_back(s + offset);
    offset += part.sites;
  };

  if (slide) {
    append(*slide, "slide");
    g.edges.push_back({slide->sites, slide->sites + 1, coupling});
  }
  int runway_offset = offset;
  append(runway, "runway");
  g.attach_site = runway_offset + runway.attach_site;
  if (tree) {
    g.tree_root = offset + tree->tree_root;
    g.edges.push_back({g.attach_site, g.tree_root, coupling});
    append(*tree, "tree");
  }
  g.sites = offset;
  std::sort(g.edges.begin(), g.edges.end(),
            [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  validate(g);
  return g;
}

void validate(const CouplingGraph& g) {
  if (g.sites < 1) throw std::logic_error("graph: needs at least one site");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : g.edges) {
    if (e.a < 1 || e.b > g.sites || e.a >= e.b)
      throw std::logic_error("graph: edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                             ") out of order or out of range");
    if (!(e.coupling > 0.0) || !std::isfinite(e.coupling))
      throw std::logic_error("graph: edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                             ") has non-positive coupling");
    if (!seen.insert({e.a, e.b}).second)
      throw std::logic_error("graph: duplicate edge (" + std::to_string(e.a) + ", " +
                             std::to_string(e.b) + ")");
  }
  std::vector<int> covered(g.sites + 1, 0);
  for (const auto& [name, sites] : g.regions)
    for (int s : sites) {
      if (s < 1 || s > g.sites)
        throw std::logic_error("graph: region " + name + " references site " + std::to_string(s) +
                               " outside 1.." + std::to_string(g.sites));
      ++covered[s];
    }
  for (int s = 1; s <= g.sites; ++s)
    if (covered[s] != 1)
      throw std::logic_error("graph: site " + std::to_string(s) +
                             " must belong to exactly one region, found " +
                             std::to_string(covered[s]));
  if (g.attach_site < 0 || g.attach_site > g.sites)
    throw std::logic_error("graph: attach site out of range");
  if (g.tree_root < 0 || g.tree_root > g.sites)
    throw std::logic_error("graph: tree root out of range");
}

const std::vector<int>& region_sites(const CouplingGraph& g, const std::string& name) {
  static const std::vector<int> empty;
  auto it = g.regions.find(name);
  return it == g.regions.end() ? empty : it->second;
}

std::vector<std::string> site_region_names(const CouplingGraph& g) {
  std::vector<std::string> names(g.sites + 1);
  for (const auto& [name, sites] : g.regions)
    for (int s : sites) names[s] = name;
  return names;
}

std::vector<int> site_degrees(const CouplingGraph& g) {
  std::vector<int> deg(g.sites + 1, 0);
  for (const Edge& e : g.edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  return deg;
}

bool is_connected(const CouplingGraph& g) {
  std::vector<std::vector<int>> adj(g.sites + 1);
  for (const Edge& e : g.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<char> seen(g.sites + 1, 0);
  std::vector<int> stack{1};
  seen[1] = 1;
  int reached = 0;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    ++reached;
    for (int t : adj[s])
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
  }
  return reached == g.sites;
}

std::string graph_to_json(const CouplingGraph& g) {
  nlohmann::ordered_json j;
  j["sites"] = g.sites;
  auto edges = nlohmann::ordered_json::array();
  auto sorted = g.edges;
  std::sort(sorted.begin(), sorted.end(),
            [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (const Edge& e : sorted) edges.push_back({e.a, e.b, e.coupling});
  j["edges"] = std::move(edges);
  auto regions = nlohmann::ordered_json::object();
  for (const auto& [name, sites] : g.regions) regions[name] = sites;
  j["regions"] = std::move(regions);
  j["attach_site"] = g.attach_site;
  return j.dump(2) + "\n";
}

}  // namespace qslide
