#ifndef MINBALL_RNG_HPP
#define MINBALL_RNG_HPP

#include <cstdint>
#include <random>

namespace minball {

using Engine = std::mt19937_64;

// Every stochastic routine splits its work into fixed blocks; block b draws from
// engine(state, b), so results do not depend on how blocks are scheduled.
struct RngState {
  std::uint64_t seed = 42;
  std::uint64_t stream = 0;

  RngState substream(std::uint64_t k) const { return {seed, stream * 1000003ULL + k + 1}; }

  Engine engine(std::uint64_t block = 0) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return Engine(seq);
  }
};

inline constexpr std::size_t kBlockSize = 4096;

} // namespace minball

#endif // MINBALL_RNG_HPP
