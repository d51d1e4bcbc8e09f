#pragma once

#include "qslide/graph.hpp"
#include "qslide/types.hpp"

#include <vector>

namespace qslide {

// Value of the site-amplitude ratio recursion: either a finite complex
// number or a signed real infinity reached through a -1/0 limit. Supports
// exactly the operations the recursion needs; adding infinities of opposite
// sign has no limit value and throws std::domain_error.
class ScatterValue {
 public:
  static ScatterValue finite(Complex v) { return ScatterValue(v, 0); }
  static ScatterValue infinite(int sign);

  bool is_finite() const { return sign_ == 0; }
  bool is_infinite() const { return sign_ != 0; }
  bool is_zero() const { return sign_ == 0 && value_ == Complex(0, 0); }

  Complex value() const;  // finite values only
  int sign() const;       // infinite values only

  ScatterValue neg_inverse() const;  // -1 / *this
  friend ScatterValue operator+(const ScatterValue& a, const ScatterValue& b);
  friend bool operator==(const ScatterValue& a, const ScatterValue& b);

 private:
  ScatterValue(Complex v, int sign) : value_(v), sign_(sign) {}
  Complex value_;
  int sign_;
};

// Open-chain dispersion E = -2 cos(theta) at unit coupling.
Real eigen_energy(Real theta);

// NAND gate on a flat input vector (power-of-two length), evaluated level by
// level up the tree.
int nand_eval(const std::vector<int>& inputs);

// Amplitude ratio y(E) = psi(root) / psi(attach) for a wave of energy E
// hitting the tree, from the bottom-up ratio recursion Y = -1/(E + sum of
// child ratios); childless sites contribute -1/E. At E = 0: y = 0 when the
// tree evaluates to 1, y = -infinity when it evaluates to 0.
ScatterValue tree_fraction(const NandTreeSpec& spec, Real energy);

struct ScatteringResult {
  Real energy = 0.0;
  Real theta = 0.0;
  ScatterValue y = ScatterValue::finite(Complex(0, 0));
  Complex t{0, 0};    // transmission amplitude
  Complex r{0, 0};    // reflection amplitude, t - 1
  bool pole = false;  // y infinite away from E = 0 (finite-tree resonance)
};

// Plane-wave transmission past the attached tree:
// t = 2i sin(theta) / (2i sin(theta) + y(E)).
ScatteringResult transmission(const NandTreeSpec& spec, Real theta);

// Same, parameterized by energy so E = 0 reaches the exact zero/infinity
// arithmetic (theta = pi/2 in floating point lands a hair off the band
// center). Requires |energy| < 2.
ScatteringResult transmission_at_energy(const NandTreeSpec& spec, Real energy);

// Small-energy transmission bound: |t| < 8 sqrt(N) |E| when the tree
// evaluates to 0, |t| > 1 - 8 sqrt(N) |E| when it evaluates to 1. Valid for
// 0 < |E| < 1 / (16 sqrt(N)).
struct BoundsReport {
  Real energy = 0.0;
  Real t_abs = 0.0;
  Real bound = 0.0;
  int nand_result = 0;
  bool ok = false;
};

BoundsReport check_bounds(const NandTreeSpec& spec, Real energy);

}  // namespace qslide
