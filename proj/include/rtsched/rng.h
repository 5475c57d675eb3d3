#ifndef RTSCHED_RNG_H_
#define RTSCHED_RNG_H_

#include <cstdint>
#include <random>

namespace rtsched {

// Independent random streams derived from one master seed. Every stochastic
// component of a run draws from exactly one of these.
enum class Stream : std::uint64_t {
  kArrival = 1,
  kChannel = 2,
  kTransmission = 3,
  kPolicy = 4,
  kEstimator = 5,
};

std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t master_seed, Stream stream);

// Thin wrapper over mt19937_64. The conversions to doubles and bounded
// integers are done here rather than by <random> distributions so the
// sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master_seed, Stream stream) : engine_(DeriveSeed(master_seed, stream)) {}

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t Below(std::uint64_t bound);
  // Trials up to and including the first success, or cap + 1 if none of the
  // first cap trials succeed.
  int Geometric(double p, int cap);

 private:
  std::mt19937_64 engine_;
};

}  // namespace rtsched

#endif  // RTSCHED_RNG_H_
