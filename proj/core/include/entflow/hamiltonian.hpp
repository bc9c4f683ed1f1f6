#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "entflow/fock_basis.hpp"

namespace entflow {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

// Real symmetric sparse matrix in triplet form. Both (r,c) and (c,r) are
// stored for off-diagonal couplings; the diagonal appears once.
class SparseHamiltonian {
 public:
  SparseHamiltonian(std::size_t dimension, std::vector<Triplet> entries);

  std::size_t dimension() const { return dim_; }
  const std::vector<Triplet>& entries() const { return entries_; }

  double trace() const;
  Eigen::MatrixXd to_dense() const;

  // Coordinate export: one "row col value" triple per line, zero-based,
  // values at 17 significant digits.
  void write_coordinate(std::ostream& os) const;

 private:
  std::size_t dim_;
  std::vector<Triplet> entries_;
};

// Hopping (-J, nearest neighbor, both spins), on-site interaction U on doubly
// occupied sites, and the two-site barrier (v_left on L/2, v_right on L/2+1).
SparseHamiltonian build_hamiltonian(const FockBasis& basis, const SystemSpec& spec);

// Diagonal of n̂_region = Σ_{j in sites} n̂_j in the given basis.
Eigen::VectorXd region_number_operator(const FockBasis& basis, const std::vector<int>& sites);

}  // namespace entflow
