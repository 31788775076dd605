#ifndef SVP_MATRIX_HPP
#define SVP_MATRIX_HPP

#include <array>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace svp {

inline constexpr int kMaxDim = 8;

// Dense d x d matrix, d <= 8, row-major. Value type for cocycle generators
// and their products; deliberately not a general linear-algebra class.
class Mat {
 public:
  Mat() : d_(0) { a_.fill(0.0); }
  explicit Mat(int d);
  Mat(int d, std::initializer_list<double> entries);
  static Mat identity(int d);
  static Mat diag(std::initializer_list<double> entries);
  static Mat from_rows(const std::vector<std::vector<double>>& rows);

  int dim() const { return d_; }
  double& at(int i, int j) { return a_[std::size_t(i) * kMaxDim + j]; }
  double at(int i, int j) const { return a_[std::size_t(i) * kMaxDim + j]; }

  Mat transpose() const;
  Mat operator*(const Mat& rhs) const;
  Mat scaled(double c) const;
  Mat operator+(const Mat& rhs) const;

  double max_abs() const;
  bool finite() const;

 private:
  int d_;
  std::array<double, kMaxDim * kMaxDim> a_;
};

// Matrix with a separated log-scale, for cocycle products over long words:
// represents exp(log_scale) * m without overflowing doubles.
struct ScaledMat {
  Mat m;
  double log_scale = 0.0;

  // factor max-abs entry into log_scale (no-op for the zero matrix)
  void renormalize();
};

// Singular values of M, square roots of the eigenvalues of M^T M, sorted
// non-increasing. Cyclic Jacobi on the symmetric product; off-diagonal norm
// tolerance 1e-13 relative to the Frobenius norm.
std::vector<double> singular_values(const Mat& m);

// Smallest singular value; throws Singular if the matrix is not invertible.
double min_norm(const Mat& m);

double determinant(const Mat& m);
Mat inverse(const Mat& m);  // throws Singular

// Jacobi eigenvalues of a symmetric matrix (ascending); exposed for tests.
std::vector<double> symmetric_eigenvalues(const Mat& s);

}  // namespace svp

#endif
