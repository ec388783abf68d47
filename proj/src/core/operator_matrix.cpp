#include "tdz/operator_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tdz/errors.hpp"

namespace tdz {

namespace {
Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

void require_same_shape(const OperatorMatrix& a, const OperatorMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::input, std::string("shape mismatch in matrix ") + op);
  }
}
}  // namespace

OperatorMatrix::OperatorMatrix(std::size_t rows, std::size_t cols)
    : m_(Eigen::MatrixXcd::Zero(idx(rows), idx(cols))) {}

OperatorMatrix::OperatorMatrix(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      if (!std::isfinite(m_(i, j).real()) || !std::isfinite(m_(i, j).imag())) {
        throw Error(ErrorKind::input, "operator matrix entries must be finite");
      }
    }
  }
}

OperatorMatrix OperatorMatrix::identity(std::size_t n) {
  return OperatorMatrix(Eigen::MatrixXcd::Identity(idx(n), idx(n)));
}

OperatorMatrix OperatorMatrix::diagonal(std::span<const cd> values) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(idx(values.size()), idx(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(idx(i), idx(i)) = values[i];
  return OperatorMatrix(std::move(m));
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(Eigen::MatrixXcd(m_.adjoint())); }

OperatorMatrix OperatorMatrix::leading_block(std::size_t rows, std::size_t cols) const {
  if (rows > this->rows() || cols > this->cols()) {
    throw Error(ErrorKind::input, "leading block exceeds matrix shape");
  }
  return OperatorMatrix(Eigen::MatrixXcd(m_.topLeftCorner(idx(rows), idx(cols))));
}

double OperatorMatrix::max_abs() const {
  double best = 0.0;
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    for (Eigen::Index i = 0; i < m_.rows(); ++i) best = std::max(best, std::abs(m_(i, j)));
  }
  return best;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::input, "shape mismatch in matrix product");
  return OperatorMatrix(Eigen::MatrixXcd(a.m_ * b.m_));
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_shape(a, b, "sum");
  return OperatorMatrix(Eigen::MatrixXcd(a.m_ + b.m_));
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_shape(a, b, "difference");
  return OperatorMatrix(Eigen::MatrixXcd(a.m_ - b.m_));
}

OperatorMatrix operator*(cd s, const OperatorMatrix& a) { return OperatorMatrix(Eigen::MatrixXcd(s * a.m_)); }

}  // namespace tdz
