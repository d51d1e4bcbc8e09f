#include "qslide/slide.hpp"

#include "qslide/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qslide {

long long binomial(int n, int k) {
  if (n < 0 || n > 62)
    throw std::invalid_argument("binomial: n must be in [0, 62], got " + std::to_string(n));
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc *= n - k + i;
    acc /= i;
  }
  return static_cast<long long>(acc);
}

KravchukMatrix kravchuk_matrix(int order) {
  if (order < 1 || order > 62)
    throw std::invalid_argument("kravchuk_matrix: order must be in [1, 62], got " +
                                std::to_string(order));
  KravchukMatrix k;
  k.order = order;
  k.entries.resize(order + 1, order + 1);
  for (int i = 0; i <= order; ++i)
    for (int j = 0; j <= order; ++j) {
      long long v = 0;
      for (int l = 0; l <= j && l <= i; ++l) {
        long long term = binomial(order - j, i - l) * binomial(j, l);
        v += (l % 2 == 0) ? term : -term;
      }
      k.entries(i, j) = v;
    }
  return k;
}

bool kravchuk_involution_holds(const KravchukMatrix& k) {
  int n = k.order + 1;
  __int128 expected = __int128(1) << k.order;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      __int128 acc = 0;
      for (int l = 0; l < n; ++l)
        acc += __int128(k.entries(i, l)) * __int128(k.entries(l, j));
      if (acc != (i == j ? expected : 0)) return false;
    }
  return true;
}

Complex slide_amplitude(int chain_length, int site, Real time) {
  if (chain_length < 2)
    throw std::invalid_argument("slide_amplitude: chain needs at least 2 sites");
  if (site < 1 || site > chain_length)
    throw std::invalid_argument("slide_amplitude: site out of range");
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Real mag = std::sqrt(Real(binomial(chain_length - 1, site - 1))) *
             std::pow(std::cos(time), chain_length - site) *
             std::pow(std::sin(time), site - 1);
  return mag * ipow[site % 4];
}

PacketParams packet_params(int slide_length, Real coupling) {
  if (slide_length < 2)
    throw std::invalid_argument("packet_params: slide needs at least 2 sites");
  if (!(coupling > 0.0))
    throw std::invalid_argument("packet_params: coupling must be positive");
  PacketParams p;
  Real n = Real(2 * slide_length - 1);
  p.center = n / 2.0;
  p.width_sq = n / 4.0;
  p.velocity = coupling * n / Real(slide_length);
  return p;
}

CouplingGraph build_parabolic_chain(int length) {
  if (length < 2)
    throw std::invalid_argument("build_parabolic_chain: length must be at least 2");
  CouplingGraph g;
  g.sites = length;
  for (int i = 1; i < length; ++i)
    g.edges.push_back({i, i + 1, std::sqrt(Real(i) * Real(length - i))});
  auto& sites = g.regions["chain"];
  for (int s = 1; s <= length; ++s) sites.push_back(s);
  validate(g);
  return g;
}

Real verify_pst(int chain_length, Real tol) {
  Hamiltonian h(build_parabolic_chain(chain_length));
  ComplexVector psi0 = ComplexVector::Zero(chain_length);
  psi0(0) = 1.0;
  ComplexVector psi = evolve(h, psi0, M_PI / 2.0);
  Real fidelity = std::abs(psi(chain_length - 1));
  if (fidelity < 1.0 - tol)
    throw std::runtime_error("verify_pst: transfer fidelity " + std::to_string(fidelity) +
                             " below 1 - " + std::to_string(tol) + " for length " +
                             std::to_string(chain_length));
  return fidelity;
}

}  // namespace qslide
