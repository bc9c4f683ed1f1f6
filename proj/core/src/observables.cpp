#include "entflow/observables.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace entflow {

namespace {

constexpr double kEigenvalueZero = 1e-12;

// Local occupation code of one site: n_up + 2 n_down in {0,1,2,3}.
int local_code(FockState s, int site) {
  return static_cast<int>((s.up >> (site - 1)) & 1u) +
         2 * static_cast<int>((s.down >> (site - 1)) & 1u);
}

// Base-4 digits over the given sites, ascending site = ascending digit.
std::uint64_t block_code(FockState s, const std::vector<int>& sites) {
  std::uint64_t code = 0;
  for (std::size_t k = 0; k < sites.size(); ++k)
    code |= static_cast<std::uint64_t>(local_code(s, sites[k])) << (2 * k);
  return code;
}

void require_post_barrier(const QuantumState& psi, const Bipartition& part) {
  if (psi.basis == nullptr) throw ConfigError("state has no basis handle");
  if (part.L != psi.basis->sites())
    throw ConfigError("bipartition size does not match the state's chain");
  const Bipartition expected = Bipartition::post_barrier(part.L);
  if (part.a_sites != expected.a_sites || part.b_sites != expected.b_sites)
    throw ConfigError(
        "only the post-barrier trailing partition is supported (sign "
        "conventions are validated for contiguous trailing blocks only)");
}

double entropy_from_eigenvalues(const Eigen::VectorXd& eigs) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    const double lambda = eigs(i);
    if (lambda < -kEigenvalueZero)
      throw NumericError("density-matrix eigenvalue " + std::to_string(lambda) +
                         " below -1e-12");
    // Weights within the clamp tolerance of 0 or 1 contribute exactly nothing.
    if (lambda < kEigenvalueZero || lambda > 1.0 - kEigenvalueZero) continue;
    acc += lambda * std::log(lambda);
  }
  const double s = -acc;
  return s == 0.0 ? 0.0 : s;  // normalize -0
}

}  // namespace

Bipartition Bipartition::post_barrier(int L) {
  if (L < 4 || L % 2 != 0)
    throw ConfigError("post-barrier bipartition needs even L >= 4");
  Bipartition part;
  part.L = L;
  for (int j = 1; j <= L / 2 + 1; ++j) part.b_sites.push_back(j);
  for (int j = L / 2 + 2; j <= L; ++j) part.a_sites.push_back(j);
  return part;
}

ReducedDensityMatrix::ReducedDensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) throw ConfigError("density matrix must be square");
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw NumericError("density matrix not Hermitian: " + std::to_string(herm));
  const double tr = trace();
  if (std::abs(tr - 1.0) > 1e-10)
    throw NumericError("density matrix trace " + std::to_string(tr) + " != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("density-matrix eigensolve failed");
  eigenvalues_ = solver.eigenvalues();
}

double region_density(const QuantumState& psi, const std::vector<int>& sites) {
  if (psi.basis == nullptr) throw ConfigError("state has no basis handle");
  const FockBasis& basis = *psi.basis;
  for (int j : sites)
    if (j < 1 || j > basis.sites())
      throw ConfigError("region site " + std::to_string(j) + " outside chain");
  double density = 0.0;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    int occ = 0;
    for (int j : sites) occ += FockBasis::site_occupation(basis.state(i), j);
    if (occ != 0) density += std::norm(psi.amplitudes(static_cast<Eigen::Index>(i))) * occ;
  }
  return density;
}

ReducedDensityMatrix reduced_density_matrix(const QuantumState& psi, const Bipartition& part) {
  require_post_barrier(psi, part);
  if (part.a_size() > 5)
    throw ConfigError("dense rho_A capped at |A| <= 5 sites; use entanglement_entropy");
  const FockBasis& basis = *psi.basis;
  const Eigen::Index dim_a = Eigen::Index(1) << (2 * part.a_size());

  // Group amplitudes by B pattern, then accumulate the outer products.
  std::map<std::uint64_t, std::vector<std::pair<Eigen::Index, Complex>>> columns;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const Complex amp = psi.amplitudes(static_cast<Eigen::Index>(i));
    if (amp == Complex(0.0, 0.0)) continue;
    const FockState s = basis.state(i);
    const auto a = static_cast<Eigen::Index>(block_code(s, part.a_sites));
    columns[block_code(s, part.b_sites)].emplace_back(a, amp);
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim_a, dim_a);
  for (const auto& [b, col] : columns)
    for (const auto& [a1, amp1] : col)
      for (const auto& [a2, amp2] : col) rho(a1, a2) += amp1 * std::conj(amp2);
  return ReducedDensityMatrix(std::move(rho));
}

double von_neumann_entropy(const ReducedDensityMatrix& rho) {
  return entropy_from_eigenvalues(rho.eigenvalues());
}

double entanglement_entropy(const QuantumState& psi, const Bipartition& part) {
  require_post_barrier(psi, part);
  const FockBasis& basis = *psi.basis;

  // Compact indices for the A patterns that actually occur.
  std::map<std::uint64_t, Eigen::Index> a_rows;
  std::map<std::uint64_t, std::vector<std::pair<Eigen::Index, Complex>>> columns;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const Complex amp = psi.amplitudes(static_cast<Eigen::Index>(i));
    if (amp == Complex(0.0, 0.0)) continue;
    const FockState s = basis.state(i);
    const std::uint64_t a_code = block_code(s, part.a_sites);
    auto it = a_rows.find(a_code);
    if (it == a_rows.end())
      it = a_rows.emplace(a_code, static_cast<Eigen::Index>(a_rows.size())).first;
    columns[block_code(s, part.b_sites)].emplace_back(it->second, amp);
  }

  const auto n = static_cast<Eigen::Index>(a_rows.size());
  if (n == 0) throw NumericError("entanglement entropy of a zero state");
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [b, col] : columns)
    for (const auto& [r1, amp1] : col)
      for (const auto& [r2, amp2] : col) gram(r1, r2) += amp1 * std::conj(amp2);

  const double tr = gram.trace().real();
  if (std::abs(tr - 1.0) > 1e-10)
    throw NumericError("state norm drifted: Schmidt weights sum to " + std::to_string(tr));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("Schmidt spectrum eigensolve failed");
  return entropy_from_eigenvalues(solver.eigenvalues());
}

}  // namespace entflow
