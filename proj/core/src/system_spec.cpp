#include "entflow/system_spec.hpp"

#include <algorithm>
#include <cmath>

namespace entflow {

double SystemSpec::barrier_height() const { return std::max(v_left, v_right); }

void SystemSpec::set_barrier(double h) {
  v_left = h / 2.0;
  v_right = h;
}

void SystemSpec::validate_sector() const {
  if (L < 2 || L > 32) throw ConfigError("L must lie in [2, 32], got " + std::to_string(L));
  if (L % 2 != 0) throw ConfigError("L must be even, got " + std::to_string(L));
  if (n_up < 0 || n_down < 0)
    throw ConfigError("particle counts must be nonnegative");
  if (n_up > L) throw ConfigError("n_up exceeds site count");
  if (n_down > L) throw ConfigError("n_down exceeds site count");
  const int n = total_particles();
  if (n < 1 || n > 2)
    throw ConfigError("total particle number must be 1 or 2, got " + std::to_string(n));
}

void SystemSpec::validate() const {
  validate_sector();
  if (L < 4) throw ConfigError("trajectories need L >= 4 (post-barrier region must be nonempty)");
  if (!(J > 0.0) && J != 0.0) throw ConfigError("J must be finite and nonnegative");
  if (!std::isfinite(J) || !std::isfinite(U) || !std::isfinite(v_left) || !std::isfinite(v_right))
    throw ConfigError("couplings must be finite");
  if (!(barrier_height() > 0.0)) throw ConfigError("barrier height h must be positive");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be nonnegative");
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");

  int up = 0, down = 0;
  std::vector<Placement> seen;
  for (const Placement& p : initial_placement) {
    if (p.site < 1 || p.site > L)
      throw ConfigError("initial placement site " + std::to_string(p.site) + " outside chain");
    if (p.site >= L / 2)
      throw ConfigError("initial placement site " + std::to_string(p.site) +
                        " is not strictly before the barrier (site < L/2 required)");
    if (std::find(seen.begin(), seen.end(), p) != seen.end())
      throw ConfigError("Pauli exclusion: duplicate placement at site " + std::to_string(p.site));
    seen.push_back(p);
    (p.spin == Spin::Up ? up : down)++;
  }
  if (up != n_up || down != n_down)
    throw ConfigError("initial placement has (" + std::to_string(up) + "," + std::to_string(down) +
                      ") particles but sector is (" + std::to_string(n_up) + "," +
                      std::to_string(n_down) + ")");
  if (tunneling_only && !(U < barrier_height()))
    throw ConfigError("tunneling-only regime requires U < h");
}

std::vector<double> SystemSpec::time_grid() const {
  std::vector<double> times(static_cast<std::size_t>(n_samples));
  if (n_samples == 1) {
    times[0] = 0.0;
    return times;
  }
  for (int i = 0; i < n_samples; ++i)
    times[static_cast<std::size_t>(i)] = t_max * static_cast<double>(i) / (n_samples - 1);
  return times;
}

}  // namespace entflow
