#include "entflow/hamiltonian.hpp"

#include <bit>
#include <ostream>
#include <set>
#include <string>

#include "entflow/numio.hpp"

namespace entflow {

SparseHamiltonian::SparseHamiltonian(std::size_t dimension, std::vector<Triplet> entries)
    : dim_(dimension), entries_(std::move(entries)) {
  for (const Triplet& t : entries_)
    if (t.row >= dim_ || t.col >= dim_)
      throw ConfigError("Hamiltonian triplet index out of range");
}

double SparseHamiltonian::trace() const {
  double tr = 0.0;
  for (const Triplet& t : entries_)
    if (t.row == t.col) tr += t.value;
  return tr;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_),
                                            static_cast<Eigen::Index>(dim_));
  for (const Triplet& t : entries_)
    m(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) += t.value;
  return m;
}

void SparseHamiltonian::write_coordinate(std::ostream& os) const {
  for (const Triplet& t : entries_)
    os << t.row << ' ' << t.col << ' ' << format_g17(t.value) << '\n';
}

SparseHamiltonian build_hamiltonian(const FockBasis& basis, const SystemSpec& spec) {
  spec.validate_sector();
  if (basis.sites() != spec.L || basis.n_up() != spec.n_up || basis.n_down() != spec.n_down)
    throw ConfigError("basis does not match spec sector");

  const int L = spec.L;
  const int barrier_left = L / 2;
  const int barrier_right = L / 2 + 1;
  const std::size_t dim = basis.dimension();

  std::vector<Triplet> entries;
  entries.reserve(dim * (2 + 2 * static_cast<std::size_t>(spec.total_particles())));

  for (std::size_t i = 0; i < dim; ++i) {
    const FockState s = basis.state(i);
    const int doubles = std::popcount(s.up & s.down);
    const double diag = spec.U * doubles +
                        spec.v_left * FockBasis::site_occupation(s, barrier_left) +
                        spec.v_right * FockBasis::site_occupation(s, barrier_right);
    if (diag != 0.0) entries.push_back({i, i, diag});

    for (int bond = 1; bond <= L - 1; ++bond) {
      for (Spin spin : {Spin::Up, Spin::Down}) {
        for (HopDirection dir : {HopDirection::Right, HopDirection::Left}) {
          const HopResult hop = hop_element(basis, i, bond, spin, dir);
          if (!hop.annihilated())
            entries.push_back({hop.to, i, -spec.J * hop.sign});
        }
      }
    }
  }
  return SparseHamiltonian(dim, std::move(entries));
}

Eigen::VectorXd region_number_operator(const FockBasis& basis, const std::vector<int>& sites) {
  std::set<int> unique;
  for (int j : sites) {
    if (j < 1 || j > basis.sites())
      throw ConfigError("region site " + std::to_string(j) + " outside chain");
    if (!unique.insert(j).second)
      throw ConfigError("region site " + std::to_string(j) + " listed twice");
  }
  Eigen::VectorXd diag(static_cast<Eigen::Index>(basis.dimension()));
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    int occ = 0;
    for (int j : unique) occ += FockBasis::site_occupation(basis.state(i), j);
    diag(static_cast<Eigen::Index>(i)) = occ;
  }
  return diag;
}

}  // namespace entflow
