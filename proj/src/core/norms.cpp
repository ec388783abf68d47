#include "tdz/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tdz/errors.hpp"

namespace tdz {

namespace {

constexpr int kMaxIterations = 200000;
constexpr std::uint64_t kSecondStartSeed = 0x5eed'cafe'f00dULL;

struct PowerRun {
  double lambda = 0.0;
  bool converged = false;
  Eigen::VectorXcd v;
};

// a is Hermitian positive semidefinite.
PowerRun power_iterate(const Eigen::MatrixXcd& a, Eigen::VectorXcd v, double rel_tol) {
  PowerRun run;
  v.normalize();
  for (int it = 0; it < kMaxIterations; ++it) {
    Eigen::VectorXcd w = a * v;
    const double w_norm = w.norm();
    if (w_norm == 0.0) {
      run.lambda = 0.0;
      run.converged = true;
      run.v = v;
      return run;
    }
    run.lambda = v.dot(w).real();
    const double residual = (w - run.lambda * v).norm();
    if (residual <= rel_tol * run.lambda) {
      run.converged = true;
      run.v = v;
      return run;
    }
    v = w / w_norm;
  }
  run.v = v;
  return run;
}

std::vector<cd> to_std(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

double operator_norm(const OperatorMatrix& m, const Tolerances& tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Eigen::MatrixXcd& d = m.dense();
  // Same nonzero spectrum either way; iterate on the smaller Gram matrix.
  const Eigen::MatrixXcd gram = d.cols() <= d.rows() ? Eigen::MatrixXcd(d.adjoint() * d)
                                                     : Eigen::MatrixXcd(d * d.adjoint());
  const double rel_tol = tol.eps_norm / 10.0;
  const Eigen::Index n = gram.rows();

  PowerRun ones = power_iterate(gram, Eigen::VectorXcd::Ones(n), rel_tol);
  if (!ones.converged) {
    throw ConvergenceError("power iteration did not converge", std::sqrt(std::max(ones.lambda, 0.0)),
                           to_std(ones.v));
  }

  std::mt19937_64 rng(kSecondStartSeed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start(i) = cd(normal(rng), normal(rng));
  PowerRun scrambled = power_iterate(gram, start, rel_tol);
  if (!scrambled.converged) {
    throw ConvergenceError("power iteration did not converge", std::sqrt(std::max(scrambled.lambda, 0.0)),
                           to_std(scrambled.v));
  }
  return std::sqrt(std::max({ones.lambda, scrambled.lambda, 0.0}));
}

double smallest_singular_value(const OperatorMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.dense());
  return svd.singularValues().minCoeff();
}

}  // namespace tdz
