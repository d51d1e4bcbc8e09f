#include "qslide/scattering.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qslide {

ScatterValue ScatterValue::infinite(int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("ScatterValue: infinity sign must be +1 or -1");
  return ScatterValue(Complex(0, 0), sign);
}

Complex ScatterValue::value() const {
  if (!is_finite()) throw std::logic_error("ScatterValue: value() on an infinite value");
  return value_;
}

int ScatterValue::sign() const {
  if (!is_infinite()) throw std::logic_error("ScatterValue: sign() on a finite value");
  return sign_;
}

ScatterValue ScatterValue::neg_inverse() const {
  if (is_infinite()) return finite(Complex(0, 0));
  if (value_ == Complex(0, 0)) return infinite(-1);
  return finite(Complex(-1, 0) / value_);
}

ScatterValue operator+(const ScatterValue& a, const ScatterValue& b) {
  if (a.is_finite() && b.is_finite()) return ScatterValue::finite(a.value_ + b.value_);
  if (a.is_finite()) return b;
  if (b.is_finite()) return a;
  if (a.sign_ != b.sign_)
    throw std::domain_error("ScatterValue: sum of opposite-sign infinities is indeterminate");
  return a;
}

bool operator==(const ScatterValue& a, const ScatterValue& b) {
  if (a.sign_ != b.sign_) return false;
  return a.is_infinite() || a.value_ == b.value_;
}

Real eigen_energy(Real theta) {
  if (!(theta >= 0.0) || !(theta <= M_PI))
    throw std::invalid_argument("eigen_energy: theta must lie in [0, pi]");
  return -2.0 * std::cos(theta);
}

int nand_eval(const std::vector<int>& inputs) {
  size_t n = inputs.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("nand_eval: input count must be a power of two >= 2, got " +
                                std::to_string(n));
  std::vector<int> level = inputs;
  for (int b : level)
    if (b != 0 && b != 1) throw std::invalid_argument("nand_eval: bits must be 0 or 1");
  while (level.size() > 1) {
    std::vector<int> next(level.size() / 2);
    for (size_t i = 0; i < next.size(); ++i) next[i] = 1 - level[2 * i] * level[2 * i + 1];
    level = std::move(next);
  }
  return level[0];
}

namespace {

ScatterValue subtree_ratio(const NandTreeSpec& spec, Real energy, int level, int index) {
  ScatterValue acc = ScatterValue::finite(Complex(energy, 0));
  if (level == spec.depth) {
    if (spec.inputs[index] == 1)
      acc = acc + ScatterValue::finite(Complex(energy, 0)).neg_inverse();
  } else {
    acc = acc + subtree_ratio(spec, energy, level + 1, 2 * index);
    acc = acc + subtree_ratio(spec, energy, level + 1, 2 * index + 1);
  }
  return acc.neg_inverse();
}

}  // namespace

ScatterValue tree_fraction(const NandTreeSpec& spec, Real energy) {
  if (!std::isfinite(energy)) throw std::invalid_argument("tree_fraction: energy must be finite");
  return subtree_ratio(spec, energy, 0, 0);
}

ScatteringResult transmission_at_energy(const NandTreeSpec& spec, Real energy) {
  if (!(std::abs(energy) < 2.0))
    throw std::invalid_argument("transmission_at_energy: |energy| must be below the band edge 2");
  ScatteringResult res;
  res.energy = energy;
  res.theta = std::acos(-energy / 2.0);
  res.y = tree_fraction(spec, energy);
  Real s = std::sqrt(1.0 - energy * energy / 4.0);
  if (res.y.is_infinite()) {
    res.t = Complex(0, 0);
    res.r = Complex(-1, 0);
    res.pole = (energy != 0.0);
  } else {
    Complex two_i_s(0, 2.0 * s);
    res.t = two_i_s / (two_i_s + res.y.value());
    res.r = res.t - Complex(1, 0);
  }
  return res;
}

ScatteringResult transmission(const NandTreeSpec& spec, Real theta) {
  if (!(theta > 0.0) || !(theta < M_PI))
    throw std::invalid_argument("transmission: theta must lie strictly inside (0, pi)");
  ScatteringResult res = transmission_at_energy(spec, eigen_energy(theta));
  res.theta = theta;
  return res;
}

BoundsReport check_bounds(const NandTreeSpec& spec, Real energy) {
  Real n = Real(spec.input_count());
  Real limit = 1.0 / (16.0 * std::sqrt(n));
  if (!(std::abs(energy) > 0.0) || !(std::abs(energy) < limit))
    throw std::domain_error("check_bounds: need 0 < |energy| < " + std::to_string(limit) +
                            " for " + std::to_string(spec.input_count()) + " inputs");
  ScatteringResult res = transmission_at_energy(spec, energy);
  BoundsReport rep;
  rep.energy = energy;
  rep.t_abs = std::abs(res.t);
  rep.bound = 8.0 * std::sqrt(n) * std::abs(energy);
  rep.nand_result = nand_eval(spec.inputs);
  rep.ok = rep.nand_result == 0 ? (rep.t_abs < rep.bound) : (rep.t_abs > 1.0 - rep.bound);
  return rep;
}

}  // namespace qslide
