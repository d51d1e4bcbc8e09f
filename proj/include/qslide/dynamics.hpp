#pragma once

#include "qslide/graph.hpp"
#include "qslide/types.hpp"

#include <iosfwd>
#include <stdexcept>

namespace qslide {

// Dense tight-binding Hamiltonian H = sign * sum_edges J_ab (|a><b| + |b><a|)
// with an eagerly computed spectral decomposition. sign = -1 gives the
// negative-hopping convention used throughout; +1 is kept for cross-checks.
class Hamiltonian {
 public:
  explicit Hamiltonian(const CouplingGraph& g, int sign = -1);

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  int sign() const { return sign_; }
  const RealMatrix& matrix() const { return matrix_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const RealMatrix& eigenvectors() const { return eigenvectors_; }

 private:
  RealMatrix matrix_;
  RealVector eigenvalues_;
  RealMatrix eigenvectors_;
  int sign_;
};

// psi(z) = exp(-i H z) psi0 through the cached eigenbasis.
ComplexVector evolve(const Hamiltonian& h, const ComplexVector& psi0, Real distance);

// Splits evolve() so one projection can serve many readout distances.
ComplexVector eigenbasis_projection(const Hamiltonian& h, const ComplexVector& psi0);
ComplexVector evolve_projected(const Hamiltonian& h, const ComplexVector& projection,
                               Real distance);

// m * psi for a real operator on a complex state, as two real products.
template <typename Derived>
ComplexVector apply_real(const Eigen::MatrixBase<Derived>& m, const ComplexVector& psi) {
  if (m.cols() != psi.size())
    throw std::invalid_argument("apply_real: operator and state dimensions disagree");
  ComplexVector out(m.rows());
  out.real() = m * psi.real();
  out.imag() = m * psi.imag();
  return out;
}

// Normalized Gaussian profile exp(-(s - center)^2 / (4 width^2)) with site
// phase exp(-i * momentum_sign * s * pi/2), evaluated exactly per site.
// Under a sign = momentum_sign Hamiltonian the packet moves toward higher
// site indices and sits at the band center (energy 0 on a uniform chain).
ComplexVector gaussian_packet(int runway_length, Real center, Real width, int momentum_sign);

struct EnergyMoments {
  Real mean = 0.0;
  Real variance = 0.0;
};

EnergyMoments energy_moments(const Hamiltonian& h, const ComplexVector& psi);

RealVector site_probabilities(const ComplexVector& psi);

// Columns: site_index, region, re, im, prob.
void write_state_csv(std::ostream& out, const CouplingGraph& g, const ComplexVector& psi);

}  // namespace qslide
