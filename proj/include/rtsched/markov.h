#ifndef RTSCHED_MARKOV_H_
#define RTSCHED_MARKOV_H_

#include <span>
#include <stdexcept>
#include <vector>

#include "rtsched/rng.h"

namespace rtsched {

using Matrix = std::vector<std::vector<double>>;

class ReducibleChainError : public std::runtime_error {
 public:
  ReducibleChainError() : std::runtime_error("no unique stationary distribution") {}
};

// True if every row is non-negative and sums to 1 within tol.
bool IsStochastic(const Matrix& transition, double tol = 1e-12);

// True if the directed graph of positive entries is strongly connected.
bool IsIrreducible(const Matrix& transition);

// Solves pi P = pi, sum(pi) = 1. Throws ReducibleChainError unless the chain
// is irreducible.
std::vector<double> StationaryDistribution(const Matrix& transition);

// Long-run variance of sqrt(n) times the sample mean of f(X_k) for a
// stationary chain, i.e. Var(f) + 2 sum_{j>=1} Cov(f(X_0), f(X_j)), via the
// fundamental matrix. Used to size standard errors of empirical frequencies.
double AsymptoticVariance(const Matrix& transition, std::span<const double> f);

// Index i with cumulative(probabilities)[i-1] <= u < cumulative[i]. The last
// index absorbs rounding at u close to 1.
int SampleIndex(std::span<const double> probabilities, double u);

inline int StepChain(const Matrix& transition, int state, Rng& rng) {
  return SampleIndex(transition[state], rng.Uniform());
}

}  // namespace rtsched

#endif  // RTSCHED_MARKOV_H_
