#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace entflow {

// Invalid configuration or malformed input files. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: non-convergence, invariant violation, NaN. CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Spin : std::uint8_t { Up = 0, Down = 1 };

struct Placement {
  int site = 1;  // 1-based
  Spin spin = Spin::Up;
  friend bool operator==(const Placement&, const Placement&) = default;
};

// Chain geometry, particle content, couplings and the two-site barrier.
// Energies are in units of the hopping J, times in 1/J. The barrier occupies
// sites L/2 and L/2+1 with potentials (v_left, v_right); its height is
// h = max(v_left, v_right).
struct SystemSpec {
  int L = 4;
  int n_up = 1;
  int n_down = 1;
  double J = 1.0;
  double U = 2.0;
  double v_left = 2.5;
  double v_right = 5.0;
  double t_max = 100.0;
  int n_samples = 2001;
  std::vector<Placement> initial_placement{{1, Spin::Up}, {1, Spin::Down}};
  // Require U < h so transport proceeds by tunneling only.
  bool tunneling_only = false;

  double barrier_height() const;
  int total_particles() const { return n_up + n_down; }

  // Default asymmetric profile: lower shoulder h/2 on site L/2, peak h on
  // site L/2+1.
  void set_barrier(double h);

  // Enough to enumerate the Fock sector: L even in [2, 32], valid counts.
  void validate_sector() const;
  // Full trajectory-tier checks: L >= 4, h > 0, placement pre-barrier and
  // consistent with (n_up, n_down), time grid sane, U < h if tunneling_only.
  void validate() const;

  // n_samples uniform times on [0, t_max].
  std::vector<double> time_grid() const;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

}  // namespace entflow
