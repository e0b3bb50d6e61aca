#include "shs/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace shs {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

bool Mat::all_finite() const {
  for (double v : a_)
    if (!std::isfinite(v)) return false;
  return true;
}

Mat& Mat::operator+=(const Mat& other) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& other) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= other.a_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }

Mat solve(Mat a, Mat b) {
  const int n = a.rows();
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) throw std::runtime_error("solve: singular matrix");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      for (int j = 0; j < b.cols(); ++j) std::swap(b(col, j), b(pivot, j));
    }
    const double inv = 1.0 / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double factor = a(r, col) * inv;
      if (factor == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
      for (int j = 0; j < b.cols(); ++j) b(r, j) -= factor * b(col, j);
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    const double inv = 1.0 / a(col, col);
    for (int j = 0; j < b.cols(); ++j) {
      double sum = b(col, j);
      for (int k = col + 1; k < n; ++k) sum -= a(col, k) * b(k, j);
      b(col, j) = sum * inv;
    }
  }
  return b;
}

std::vector<double> solve(Mat a, std::vector<double> b) {
  Mat rhs(static_cast<int>(b.size()), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(static_cast<int>(i), 0) = b[i];
  const Mat x = solve(std::move(a), std::move(rhs));
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = x(static_cast<int>(i), 0);
  return b;
}

Mat symplectic_matrix(int d) {
  Mat j(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    j(i, d + i) = 1.0;
    j(d + i, i) = -1.0;
  }
  // J^2 = -I, asserted at construction.
  const Mat jj = j * j;
  for (int r = 0; r < 2 * d; ++r)
    for (int c = 0; c < 2 * d; ++c)
      if (jj(r, c) != (r == c ? -1.0 : 0.0))
        throw std::logic_error("symplectic_matrix: self-check failed");
  return j;
}

}  // namespace shs
