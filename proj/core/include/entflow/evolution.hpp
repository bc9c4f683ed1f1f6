#pragma once

#include <complex>
#include <span>
#include <vector>

#include "entflow/hamiltonian.hpp"

namespace entflow {

using Complex = std::complex<double>;

struct QuantumState {
  Eigen::VectorXcd amplitudes;
  const FockBasis* basis = nullptr;  // non-owning; the basis outlives its states

  double norm() const { return amplitudes.norm(); }
};

// Full real-symmetric eigendecomposition H = V diag(values) V^T.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // orthonormal columns
};

// Product state |initial_placement>; throws ConfigError on Pauli violations
// or a placement inconsistent with the basis sector.
QuantumState initial_state(const FockBasis& basis, const SystemSpec& spec);

// Dense eigensolve; verifies orthonormality and reconstruction of H.
EigenSystem eigendecompose(const SparseHamiltonian& h);

// |psi(t)> = V e^{-iEt} V^T |psi0> at each requested time (ħ = 1).
// Times must be nonnegative and ascending.
std::vector<QuantumState> evolve(const QuantumState& psi0, const EigenSystem& eig,
                                 std::span<const double> times);

QuantumState evolve_single(const QuantumState& psi0, const EigenSystem& eig, double t);

}  // namespace entflow
