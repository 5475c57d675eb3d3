#include "rtsched/rng.h"

#include <limits>

namespace rtsched {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t master_seed, Stream stream) {
  return SplitMix64(SplitMix64(master_seed) ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL));
}

std::uint64_t Rng::Below(std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

int Rng::Geometric(double p, int cap) {
  for (int trial = 1; trial <= cap; ++trial) {
    if (Bernoulli(p)) return trial;
  }
  return cap + 1;
}

}  // namespace rtsched
