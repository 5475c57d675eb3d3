#include "rtsched/markov.h"

#include <cmath>

#include <Eigen/Dense>

namespace rtsched {
namespace {

Eigen::MatrixXd ToEigen(const Matrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m[i][j];
  }
  return out;
}

std::vector<bool> Reachable(const Matrix& m, std::size_t from, bool transpose) {
  std::vector<bool> seen(m.size(), false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < m.size(); ++j) {
      double w = transpose ? m[j][i] : m[i][j];
      if (w > 0.0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

bool IsStochastic(const Matrix& transition, double tol) {
  if (transition.empty()) return false;
  for (const auto& row : transition) {
    if (row.size() != transition.size()) return false;
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

bool IsIrreducible(const Matrix& transition) {
  if (transition.empty()) return false;
  for (bool b : Reachable(transition, 0, false)) {
    if (!b) return false;
  }
  for (bool b : Reachable(transition, 0, true)) {
    if (!b) return false;
  }
  return true;
}

std::vector<double> StationaryDistribution(const Matrix& transition) {
  if (!IsIrreducible(transition)) throw ReducibleChainError();
  const auto n = static_cast<Eigen::Index>(transition.size());
  Eigen::MatrixXd a = ToEigen(transition).transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);
  std::vector<double> out(pi.data(), pi.data() + n);
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

double AsymptoticVariance(const Matrix& transition, std::span<const double> f) {
  const auto n = static_cast<Eigen::Index>(transition.size());
  const std::vector<double> pi_vec = StationaryDistribution(transition);
  Eigen::VectorXd pi = Eigen::Map<const Eigen::VectorXd>(pi_vec.data(), n);
  Eigen::VectorXd fv(n);
  for (Eigen::Index i = 0; i < n; ++i) fv(i) = f[static_cast<std::size_t>(i)];
  Eigen::VectorXd centered = fv.array() - pi.dot(fv);
  // Z = (I - P + 1 pi^T)^{-1}
  Eigen::MatrixXd z = (Eigen::MatrixXd::Identity(n, n) - ToEigen(transition) +
                       Eigen::VectorXd::Ones(n) * pi.transpose())
                          .inverse();
  Eigen::VectorXd zf = z * centered;
  double var = 2.0 * (pi.array() * centered.array() * zf.array()).sum() -
               (pi.array() * centered.array().square()).sum();
  return std::max(var, 0.0);
}

int SampleIndex(std::span<const double> probabilities, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return static_cast<int>(i);
  }
  return static_cast<int>(probabilities.size()) - 1;
}

}  // namespace rtsched
