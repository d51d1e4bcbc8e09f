#include "qslide/dynamics.hpp"

#include "qslide/io.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qslide {

Hamiltonian::Hamiltonian(const CouplingGraph& g, int sign) : sign_(sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("Hamiltonian: sign must be +1 or -1");
  validate(g);
  matrix_ = RealMatrix::Zero(g.sites, g.sites);
  for (const Edge& e : g.edges) {
    matrix_(e.a - 1, e.b - 1) = sign * e.coupling;
    matrix_(e.b - 1, e.a - 1) = sign * e.coupling;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(matrix_);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "Hamiltonian: eigensolver failed on a " << g.sites << "x" << g.sites
        << " matrix, |H| = " << matrix_.norm();
    if (g.sites <= 16) msg << "\n" << matrix_;
    throw std::runtime_error(msg.str());
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

ComplexVector eigenbasis_projection(const Hamiltonian& h, const ComplexVector& psi0) {
  if (psi0.size() != h.dimension())
    throw std::invalid_argument("eigenbasis_projection: state has dimension " +
                                std::to_string(psi0.size()) + ", Hamiltonian has " +
                                std::to_string(h.dimension()));
  return apply_real(h.eigenvectors().transpose(), psi0);
}

ComplexVector evolve_projected(const Hamiltonian& h, const ComplexVector& projection,
                               Real distance) {
  if (!(distance >= 0.0))
    throw std::invalid_argument("evolve_projected: distance must be non-negative");
  if (projection.size() != h.dimension())
    throw std::invalid_argument("evolve_projected: projection dimension mismatch");
  ComplexVector scaled(projection.size());
  for (int k = 0; k < projection.size(); ++k) {
    Real phase = -h.eigenvalues()(k) * distance;
    scaled(k) = projection(k) * Complex(std::cos(phase), std::sin(phase));
  }
  return apply_real(h.eigenvectors(), scaled);
}

ComplexVector evolve(const Hamiltonian& h, const ComplexVector& psi0, Real distance) {
  return evolve_projected(h, eigenbasis_projection(h, psi0), distance);
}

ComplexVector gaussian_packet(int runway_length, Real center, Real width, int momentum_sign) {
  if (runway_length < 1)
    throw std::invalid_argument("gaussian_packet: length must be positive");
  if (!(center > 0.0) || !(center < Real(runway_length) + 1.0))
    throw std::invalid_argument("gaussian_packet: center must lie within 1.." +
                                std::to_string(runway_length));
  if (!(width > 0.0))
    throw std::invalid_argument("gaussian_packet: width must be positive");
  if (momentum_sign != 1 && momentum_sign != -1)
    throw std::invalid_argument("gaussian_packet: momentum sign must be +1 or -1");

  // i^(-s) for s mod 4; momentum_sign = -1 uses the conjugate phases.
  static const Complex quarter[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  ComplexVector psi(runway_length);
  for (int s = 1; s <= runway_length; ++s) {
    Real d = Real(s) - center;
    Real envelope = std::exp(-d * d / (4.0 * width * width));
    Complex phase = quarter[s % 4];
    if (momentum_sign == -1) phase = std::conj(phase);
    psi(s - 1) = envelope * phase;
  }
  Real norm = psi.norm();
  if (!(norm > 0.0))
    throw std::invalid_argument("gaussian_packet: profile vanished, width too small");
  return psi / norm;
}

EnergyMoments energy_moments(const Hamiltonian& h, const ComplexVector& psi) {
  if (psi.size() != h.dimension())
    throw std::invalid_argument("energy_moments: dimension mismatch");
  Real n2 = psi.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("energy_moments: zero state");
  ComplexVector hpsi = apply_real(h.matrix(), psi);
  EnergyMoments m;
  m.mean = psi.dot(hpsi).real() / n2;
  m.variance = hpsi.squaredNorm() / n2 - m.mean * m.mean;
  return m;
}

RealVector site_probabilities(const ComplexVector& psi) {
  return psi.cwiseAbs2();
}

void write_state_csv(std::ostream& out, const CouplingGraph& g, const ComplexVector& psi) {
  if (psi.size() != g.sites)
    throw std::invalid_argument("write_state_csv: state and graph disagree on size");
  auto regions = site_region_names(g);
  out << "site_index,region,re,im,prob\n";
  for (int s = 1; s <= g.sites; ++s) {
    Complex a = psi(s - 1);
    out << s << ',' << regions[s] << ',' << format_double(a.real()) << ','
        << format_double(a.imag()) << ',' << format_double(std::norm(a)) << '\n';
  }
}

}  // namespace qslide
