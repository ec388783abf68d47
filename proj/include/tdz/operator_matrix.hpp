#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace tdz {

using cd = std::complex<double>;

/// Dense complex matrix standing in for a finite section of a bounded
/// operator. Entries are always finite.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(std::size_t rows, std::size_t cols);
  explicit OperatorMatrix(Eigen::MatrixXcd entries);

  static OperatorMatrix identity(std::size_t n);
  static OperatorMatrix diagonal(std::span<const cd> values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }
  bool is_square() const noexcept { return m_.rows() == m_.cols(); }

  cd operator()(std::size_t r, std::size_t c) const { return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)); }
  const Eigen::MatrixXcd& dense() const noexcept { return m_; }

  OperatorMatrix adjoint() const;
  /// Leading rows x cols block.
  OperatorMatrix leading_block(std::size_t rows, std::size_t cols) const;

  /// Largest entry modulus; zero iff the matrix is exactly zero.
  double max_abs() const;
  bool is_zero() const { return max_abs() == 0.0; }

  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(cd s, const OperatorMatrix& a);

 private:
  Eigen::MatrixXcd m_;
};

}  // namespace tdz
