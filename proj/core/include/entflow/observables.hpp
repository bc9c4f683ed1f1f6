#pragma once

#include <vector>

#include "entflow/evolution.hpp"

namespace entflow {

// Post-barrier bipartition: A = {L/2+2, ..., L}, B = {1, ..., L/2+1}.
// A is a contiguous trailing block of sites (and, in site-major mode order,
// of modes).
struct Bipartition {
  int L = 0;
  std::vector<int> a_sites;
  std::vector<int> b_sites;

  static Bipartition post_barrier(int L);
  int a_size() const { return static_cast<int>(a_sites.size()); }
  int b_size() const { return static_cast<int>(b_sites.size()); }
};

// Hermitian PSD matrix of dimension 4^|A| with an eager eigenvalue cache.
// Construction validates trace = 1 (1e-10) and Hermiticity.
class ReducedDensityMatrix {
 public:
  explicit ReducedDensityMatrix(Eigen::MatrixXcd rho);

  const Eigen::MatrixXcd& matrix() const { return rho_; }
  std::size_t dimension() const { return static_cast<std::size_t>(rho_.rows()); }
  double trace() const { return rho_.trace().real(); }
  // Ascending; may contain tiny negatives down to -1e-12.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::MatrixXcd rho_;
  Eigen::VectorXd eigenvalues_;
};

// Expectation of the total particle number on the given sites.
double region_density(const QuantumState& psi, const std::vector<int>& sites);

// rho_A by scattering amplitudes into the (A, B) occupation product structure
// (local site dimension 4) and contracting B. Only the post-barrier trailing
// partition is supported.
ReducedDensityMatrix reduced_density_matrix(const QuantumState& psi, const Bipartition& part);

// -Tr(rho ln rho) in nats, with 0 ln 0 := 0. Eigenvalues below 1e-12 are
// treated as exact zeros; values below -1e-12 are an error.
double von_neumann_entropy(const ReducedDensityMatrix& rho);

// Same quantity computed from the Schmidt spectrum without materializing the
// 4^|A| matrix; usable for any chain size.
double entanglement_entropy(const QuantumState& psi, const Bipartition& part);

}  // namespace entflow
