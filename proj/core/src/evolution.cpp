#include "entflow/evolution.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace entflow {

QuantumState initial_state(const FockBasis& basis, const SystemSpec& spec) {
  std::uint32_t up = 0, down = 0;
  for (const Placement& p : spec.initial_placement) {
    if (p.site < 1 || p.site > basis.sites())
      throw ConfigError("placement site " + std::to_string(p.site) + " outside chain");
    const std::uint32_t bit = 1u << (p.site - 1);
    std::uint32_t& mask = (p.spin == Spin::Up) ? up : down;
    if (mask & bit)
      throw ConfigError("Pauli exclusion: two " +
                        std::string(p.spin == Spin::Up ? "up" : "down") +
                        " particles on site " + std::to_string(p.site));
    mask |= bit;
  }
  if (std::popcount(up) != basis.n_up() || std::popcount(down) != basis.n_down())
    throw ConfigError("initial placement does not match the (n_up, n_down) sector");

  const std::size_t idx = basis.index_of({up, down});
  if (idx == FockBasis::npos)
    throw ConfigError("initial placement not found in basis");

  QuantumState psi;
  psi.basis = &basis;
  psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
  psi.amplitudes(static_cast<Eigen::Index>(idx)) = Complex(1.0, 0.0);
  return psi;
}

EigenSystem eigendecompose(const SparseHamiltonian& h) {
  if (h.dimension() > 10000)
    throw ConfigError("dense eigendecomposition capped at dimension 10^4");
  const Eigen::MatrixXd a = h.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigendecomposition failed to converge");

  EigenSystem eig{solver.eigenvalues(), solver.eigenvectors()};

  const Eigen::Index n = eig.values.size();
  const double max_e = n > 0 ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double recon =
      (a - eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose()).cwiseAbs().maxCoeff();
  if (recon >= 1e-9 * std::max(max_e, 1e-300) && recon > 0.0)
    throw NumericError("eigendecomposition reconstruction error " + std::to_string(recon));
  const double ortho =
      (eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (ortho >= 1e-10)
    throw NumericError("eigenvector orthonormality violated: " + std::to_string(ortho));
  return eig;
}

namespace {

void check_times(std::span<const double> times) {
  double prev = -1.0;
  for (double t : times) {
    if (!(t >= 0.0)) throw ConfigError("evolution times must be nonnegative");
    if (t < prev) throw ConfigError("evolution times must be ascending");
    prev = t;
  }
}

}  // namespace

std::vector<QuantumState> evolve(const QuantumState& psi0, const EigenSystem& eig,
                                 std::span<const double> times) {
  check_times(times);
  const Eigen::VectorXcd coeffs = eig.vectors.transpose() * psi0.amplitudes;
  std::vector<QuantumState> out;
  out.reserve(times.size());
  const Eigen::Index n = eig.values.size();
  Eigen::VectorXcd rotated(n);
  for (double t : times) {
    QuantumState psi;
    psi.basis = psi0.basis;
    if (t == 0.0) {
      psi.amplitudes = psi0.amplitudes;  // exact identity propagator
    } else {
      for (Eigen::Index k = 0; k < n; ++k) {
        const double phase = -eig.values(k) * t;
        rotated(k) = coeffs(k) * Complex(std::cos(phase), std::sin(phase));
      }
      psi.amplitudes = eig.vectors * rotated;
    }
    out.push_back(std::move(psi));
  }
  return out;
}

QuantumState evolve_single(const QuantumState& psi0, const EigenSystem& eig, double t) {
  const double times[1] = {t};
  return std::move(evolve(psi0, eig, times).front());
}

}  // namespace entflow
