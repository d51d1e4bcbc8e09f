#pragma once

#include "qslide/graph.hpp"
#include "qslide/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qslide {

// Exact binomial coefficient; n up to 62 stays within int64.
long long binomial(int n, int k);

// Integer Kravchuk matrix K_ij = sum_l (-1)^l C(order-j, i-l) C(j, l) for
// i, j in 0..order. Squares to 2^order times the identity.
struct KravchukMatrix {
  int order = 0;
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> entries;
};

KravchukMatrix kravchuk_matrix(int order);

// Checks K * K == 2^order * I in exact integer arithmetic.
bool kravchuk_involution_holds(const KravchukMatrix& k);

// Site amplitude <r| exp(-iHt) |1> on the full parabolic chain of `length`
// sites (couplings sqrt(i(length-i))): a rotating binomial profile
// sqrt(C(length-1, r-1)) cos(t)^(length-r) sin(t)^(r-1) i^r.
Complex slide_amplitude(int chain_length, int site, Real time);

// Packet emitted by a slide of `length` sites into the runway: Gaussian
// center, squared width and group speed in sites per unit distance.
struct PacketParams {
  Real center = 0.0;
  Real width_sq = 0.0;
  Real velocity = 0.0;
  Real width() const { return std::sqrt(width_sq); }
};

PacketParams packet_params(int slide_length, Real coupling);

// Full parabolic chain at unit scale; end-to-end transfer completes at
// t = pi/2.
CouplingGraph build_parabolic_chain(int length);

// End-to-end transfer fidelity |<length| exp(-iH pi/2) |1>|. Throws when it
// falls below 1 - tol.
Real verify_pst(int chain_length, Real tol);

// Moment estimates over a per-site probability profile (1-based positions).
struct PacketFit {
  Real center = 0.0;
  Real width = 0.0;
};

template <typename Derived>
PacketFit fit_packet(const Eigen::MatrixBase<Derived>& probabilities) {
  const auto& p = probabilities.derived();
  Real total = 0.0, mean = 0.0;
  for (int s = 0; s < p.size(); ++s) {
    if (p(s) < 0.0) throw std::invalid_argument("fit_packet: negative probability");
    total += p(s);
    mean += p(s) * Real(s + 1);
  }
  if (!(total > 0.0)) throw std::invalid_argument("fit_packet: profile sums to zero");
  mean /= total;
  Real var = 0.0;
  for (int s = 0; s < p.size(); ++s) {
    Real d = Real(s + 1) - mean;
    var += p(s) * d * d;
  }
  return {mean, std::sqrt(var / total)};
}

}  // namespace qslide
