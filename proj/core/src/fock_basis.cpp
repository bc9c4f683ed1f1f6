#include "entflow/fock_basis.hpp"

#include <bit>
#include <string>

namespace entflow {

namespace {

std::uint64_t key_of(FockState s) {
  return (static_cast<std::uint64_t>(s.up) << 32) | s.down;
}

// All L-bit masks with the given popcount, ascending (Gosper's hack).
std::vector<std::uint32_t> masks_with_popcount(int L, int n) {
  std::vector<std::uint32_t> out;
  if (n == 0) {
    out.push_back(0);
    return out;
  }
  const std::uint32_t limit =
      (L >= 32) ? ~0u : ((1u << L) - 1u);
  std::uint32_t v = (1u << n) - 1u;
  while (v <= limit) {
    out.push_back(v);
    const std::uint32_t t = v | (v - 1u);
    if (t == ~0u) break;  // next pattern would overflow the word
    v = (t + 1u) | (((~t & (t + 1u)) - 1u) >> (std::countr_zero(v) + 1));
  }
  return out;
}

// Spread the low 32 bits to even positions of a 64-bit word.
std::uint64_t spread_even(std::uint64_t x) {
  x = (x | (x << 16)) & 0x0000FFFF0000FFFFull;
  x = (x | (x << 8)) & 0x00FF00FF00FF00FFull;
  x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0Full;
  x = (x | (x << 2)) & 0x3333333333333333ull;
  x = (x | (x << 1)) & 0x5555555555555555ull;
  return x;
}

}  // namespace

std::uint64_t FockBasis::interleave(FockState s) {
  return spread_even(s.up) | (spread_even(s.down) << 1);
}

FockBasis::FockBasis(int L, int n_up, int n_down) : L_(L), n_up_(n_up), n_down_(n_down) {
  if (L < 1 || L > 32) throw ConfigError("FockBasis: L must lie in [1, 32]");
  if (n_up < 0 || n_up > L) throw ConfigError("FockBasis: n_up outside [0, L]");
  if (n_down < 0 || n_down > L) throw ConfigError("FockBasis: n_down outside [0, L]");
  const auto ups = masks_with_popcount(L, n_up);
  const auto downs = masks_with_popcount(L, n_down);
  states_.reserve(ups.size() * downs.size());
  for (std::uint32_t u : ups)
    for (std::uint32_t d : downs) states_.push_back({u, d});
  index_.reserve(states_.size() * 2);
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(key_of(states_[i]), i);
}

std::size_t FockBasis::index_of(FockState s) const {
  const auto it = index_.find(key_of(s));
  return it == index_.end() ? npos : it->second;
}

FockBasis build_basis(const SystemSpec& spec) {
  spec.validate_sector();
  return FockBasis(spec.L, spec.n_up, spec.n_down);
}

HopResult hop_element(const FockBasis& basis, std::size_t from, int bond, Spin spin,
                      HopDirection dir) {
  const int L = basis.sites();
  if (bond < 1 || bond > L - 1)
    throw ConfigError("hop bond " + std::to_string(bond) + " outside [1, L-1]");
  if (from >= basis.dimension()) throw ConfigError("hop source index out of range");

  const int src = (dir == HopDirection::Right) ? bond : bond + 1;
  const int dst = (dir == HopDirection::Right) ? bond + 1 : bond;

  const FockState s = basis.state(from);
  const std::uint32_t src_bit = 1u << (src - 1);
  const std::uint32_t dst_bit = 1u << (dst - 1);
  const std::uint32_t mask = (spin == Spin::Up) ? s.up : s.down;
  if (!(mask & src_bit) || (mask & dst_bit)) return {};  // source empty or Pauli blocked

  FockState t = s;
  (spin == Spin::Up ? t.up : t.down) = mask ^ src_bit ^ dst_bit;

  const int m_src = 2 * (src - 1) + (spin == Spin::Down ? 1 : 0);
  const int m_dst = 2 * (dst - 1) + (spin == Spin::Down ? 1 : 0);
  const int lo = std::min(m_src, m_dst);
  const int hi = std::max(m_src, m_dst);
  // Occupied modes strictly between source and target.
  const std::uint64_t between =
      ((1ull << hi) - 1ull) & ~((1ull << (lo + 1)) - 1ull);
  const int crossings = std::popcount(FockBasis::interleave(s) & between);

  const std::size_t to = basis.index_of(t);
  return {to, (crossings & 1) ? -1 : +1};
}

}  // namespace entflow
