#pragma once

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "entflow/system_spec.hpp"

namespace entflow {

// Occupation bit patterns of one basis state; bit j-1 corresponds to site j.
struct FockState {
  std::uint32_t up = 0;
  std::uint32_t down = 0;
  friend bool operator==(const FockState&, const FockState&) = default;
};

// Fixed-(n_up, n_down) fermionic Fock basis of an L-site chain, enumerated
// lexicographically in (up, down).
//
// Mode order is site-major: (1,up), (1,down), (2,up), (2,down), ...
// Basis states are canonical products with creation operators in ascending
// mode order, so a trailing block of sites is a trailing block of modes and
// the partial trace over the leading block needs no residual fermionic signs.
class FockBasis {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  FockBasis(int L, int n_up, int n_down);

  int sites() const { return L_; }
  int n_up() const { return n_up_; }
  int n_down() const { return n_down_; }
  std::size_t dimension() const { return states_.size(); }
  const std::vector<FockState>& states() const { return states_; }
  const FockState& state(std::size_t i) const { return states_[i]; }

  // Exact inverse of states()[i]; npos when the pattern is not in the sector.
  std::size_t index_of(FockState s) const;

  static bool occupied(FockState s, int site, Spin spin) {
    const std::uint32_t bit = 1u << (site - 1);
    return ((spin == Spin::Up ? s.up : s.down) & bit) != 0;
  }
  // 0, 1 or 2 particles on the given site.
  static int site_occupation(FockState s, int site) {
    const std::uint32_t bit = 1u << (site - 1);
    return static_cast<int>((s.up >> (site - 1)) & 1u) + static_cast<int>((s.down & bit) != 0);
  }
  // Site-major mode word: bit 2(j-1) = up on site j, bit 2(j-1)+1 = down.
  static std::uint64_t interleave(FockState s);

 private:
  int L_, n_up_, n_down_;
  std::vector<FockState> states_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

FockBasis build_basis(const SystemSpec& spec);

enum class HopDirection { Right, Left };

struct HopResult {
  std::size_t to = FockBasis::npos;
  int sign = 0;  // +1 or -1; 0 when the hop annihilates the state
  bool annihilated() const { return sign == 0; }
};

// Matrix element of the bond-j hop: Right applies c†_{j+1,σ} c_{j,σ},
// Left applies c†_{j,σ} c_{j+1,σ}. The sign is the Jordan-Wigner parity of
// occupied modes crossed in site-major order.
HopResult hop_element(const FockBasis& basis, std::size_t from, int bond, Spin spin,
                      HopDirection dir);

}  // namespace entflow
