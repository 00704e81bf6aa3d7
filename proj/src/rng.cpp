#include "irlbfgs/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace irlbfgs {

namespace {

std::uint64_t splitmix_step(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

RngState RngState::derive(std::uint64_t master_seed, std::uint64_t index) {
  // Hash the pair so neighbouring indices land in unrelated states.
  std::uint64_t s = master_seed ^ (0xa3ec647659359acdull * (index + 1));
  splitmix_step(s);
  return RngState{s};
}

std::uint64_t RngState::next_u64() { return splitmix_step(state); }

double RngState::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngState::next_gaussian() {
  // u1 must be nonzero for the log.
  double u1 = 0.0;
  do {
    u1 = next_unit();
  } while (u1 == 0.0);
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(6.283185307179586476925286766559 * u2);
}

std::size_t sample_index(RngState& rng, std::size_t N) {
  if (N == 0) throw std::invalid_argument("sample_index: empty range");
  // Multiply-shift bounded draw (bias < N / 2^64, far below statistical noise).
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(rng.next_u64()) * static_cast<unsigned __int128>(N);
  return static_cast<std::size_t>(wide >> 64);
}

}  // namespace irlbfgs
