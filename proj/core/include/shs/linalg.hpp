#pragma once

#include <vector>

namespace shs {

// Minimal dense matrix for the small (2d x 2d) systems of the implicit
// integrator and the tangent flow. Row-major.
class Mat {
public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
  static Mat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[i * cols_ + j]; }
  double operator()(int i, int j) const { return a_[i * cols_ + j]; }

  Mat transposed() const;
  double max_abs() const;
  bool all_finite() const;

  Mat& operator+=(const Mat& other);
  Mat& operator-=(const Mat& other);
  Mat& operator*=(double s);

private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);

// Solves A X = B by Gaussian elimination with partial pivoting. Throws on
// a singular pivot.
Mat solve(Mat a, Mat b);
std::vector<double> solve(Mat a, std::vector<double> b);

// Symplectic structure matrix J = (0 I; -I 0) on R^{2d}. Construction
// self-checks J*J = -I and the +-1 entry pattern.
Mat symplectic_matrix(int d);

}  // namespace shs
