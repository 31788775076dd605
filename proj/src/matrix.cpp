#include "svp/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "svp/errors.hpp"

namespace svp {

Mat::Mat(int d) : d_(d) {
  if (d < 1 || d > kMaxDim) fail(ErrorCode::BadInput, "matrix dimension out of range");
  a_.fill(0.0);
}

Mat::Mat(int d, std::initializer_list<double> entries) : Mat(d) {
  if (int(entries.size()) != d * d) fail(ErrorCode::BadInput, "entry count mismatch");
  auto it = entries.begin();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) at(i, j) = *it++;
}

Mat Mat::identity(int d) {
  Mat m(d);
  for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
  return m;
}

Mat Mat::diag(std::initializer_list<double> entries) {
  Mat m(int(entries.size()));
  int i = 0;
  for (double v : entries) m.at(i, i) = v, ++i;
  return m;
}

Mat Mat::from_rows(const std::vector<std::vector<double>>& rows) {
  int d = int(rows.size());
  Mat m(d);
  for (int i = 0; i < d; ++i) {
    if (int(rows[i].size()) != d) fail(ErrorCode::BadInput, "ragged rows");
    for (int j = 0; j < d; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

Mat Mat::transpose() const {
  Mat t(d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Mat Mat::operator*(const Mat& rhs) const {
  Mat p(d_);
  for (int i = 0; i < d_; ++i)
    for (int k = 0; k < d_; ++k) {
      double v = at(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < d_; ++j) p.at(i, j) += v * rhs.at(k, j);
    }
  return p;
}

Mat Mat::scaled(double c) const {
  Mat m(d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) m.at(i, j) = c * at(i, j);
  return m;
}

Mat Mat::operator+(const Mat& rhs) const {
  Mat m(d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) m.at(i, j) = at(i, j) + rhs.at(i, j);
  return m;
}

double Mat::max_abs() const {
  double v = 0.0;
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) v = std::max(v, std::fabs(at(i, j)));
  return v;
}

bool Mat::finite() const {
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      if (!std::isfinite(at(i, j))) return false;
  return true;
}

void ScaledMat::renormalize() {
  double s = m.max_abs();
  if (s == 0.0 || s == 1.0) return;
  m = m.scaled(1.0 / s);
  log_scale += std::log(s);
}

namespace {

// One cyclic Jacobi pass; returns the rotated matrix's off-diagonal norm.
void jacobi_rotate(Mat& s, Mat* v, int p, int q) {
  double apq = s.at(p, q);
  if (apq == 0.0) return;
  double app = s.at(p, p), aqq = s.at(q, q);
  double theta = (aqq - app) / (2.0 * apq);
  double t = (theta >= 0.0 ? 1.0 : -1.0) /
             (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
  double c = 1.0 / std::sqrt(t * t + 1.0);
  double sn = t * c;
  int d = s.dim();
  for (int k = 0; k < d; ++k) {
    double skp = s.at(k, p), skq = s.at(k, q);
    s.at(k, p) = c * skp - sn * skq;
    s.at(k, q) = sn * skp + c * skq;
  }
  for (int k = 0; k < d; ++k) {
    double spk = s.at(p, k), sqk = s.at(q, k);
    s.at(p, k) = c * spk - sn * sqk;
    s.at(q, k) = sn * spk + c * sqk;
  }
  if (v) {
    for (int k = 0; k < d; ++k) {
      double vkp = v->at(k, p), vkq = v->at(k, q);
      v->at(k, p) = c * vkp - sn * vkq;
      v->at(k, q) = sn * vkp + c * vkq;
    }
  }
}

double off_diag_norm(const Mat& s) {
  double sum = 0.0;
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j)
      if (i != j) sum += s.at(i, j) * s.at(i, j);
  return std::sqrt(sum);
}

double frobenius(const Mat& s) {
  double sum = 0.0;
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) sum += s.at(i, j) * s.at(i, j);
  return std::sqrt(sum);
}

std::vector<double> jacobi_eigenvalues(Mat s) {
  int d = s.dim();
  double scale = frobenius(s);
  if (scale == 0.0) return std::vector<double>(std::size_t(d), 0.0);
  double tol = 1e-13 * scale;
  for (int sweep = 0; sweep < 64; ++sweep) {
    if (off_diag_norm(s) <= tol) break;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) jacobi_rotate(s, nullptr, p, q);
  }
  std::vector<double> ev(std::size_t(d), 0.0);
  for (int i = 0; i < d; ++i) ev[std::size_t(i)] = s.at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Mat& s) {
  return jacobi_eigenvalues(s);
}

std::vector<double> singular_values(const Mat& m) {
  if (!m.finite()) fail(ErrorCode::BadInput, "non-finite matrix entries");
  Mat s = m.transpose() * m;
  std::vector<double> ev = jacobi_eigenvalues(s);
  std::vector<double> alphas(ev.size());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    double lambda = std::max(ev[ev.size() - 1 - i], 0.0);  // clamp roundoff
    alphas[i] = std::sqrt(lambda);
  }
  return alphas;
}

double min_norm(const Mat& m) {
  std::vector<double> a = singular_values(m);
  double smallest = a.back();
  if (smallest <= 0.0) fail(ErrorCode::Singular, "matrix has zero singular value");
  return smallest;
}

namespace {

// LU with partial pivoting; returns false on (numerically) singular input.
bool lu_decompose(Mat& a, std::array<int, kMaxDim>& perm, int& sign) {
  int d = a.dim();
  sign = 1;
  for (int i = 0; i < d; ++i) perm[std::size_t(i)] = i;
  for (int col = 0; col < d; ++col) {
    int piv = col;
    double best = std::fabs(a.at(col, col));
    for (int r = col + 1; r < d; ++r) {
      double v = std::fabs(a.at(r, col));
      if (v > best) best = v, piv = r;
    }
    if (best == 0.0) return false;
    if (piv != col) {
      for (int j = 0; j < d; ++j) std::swap(a.at(piv, j), a.at(col, j));
      std::swap(perm[std::size_t(piv)], perm[std::size_t(col)]);
      sign = -sign;
    }
    double diag = a.at(col, col);
    for (int r = col + 1; r < d; ++r) {
      double f = a.at(r, col) / diag;
      a.at(r, col) = f;
      for (int j = col + 1; j < d; ++j) a.at(r, j) -= f * a.at(col, j);
    }
  }
  return true;
}

}  // namespace

double determinant(const Mat& m) {
  Mat a = m;
  std::array<int, kMaxDim> perm;
  int sign = 0;
  if (!lu_decompose(a, perm, sign)) return 0.0;
  double det = sign;
  for (int i = 0; i < a.dim(); ++i) det *= a.at(i, i);
  return det;
}

Mat inverse(const Mat& m) {
  int d = m.dim();
  Mat a = m;
  std::array<int, kMaxDim> perm;
  int sign = 0;
  if (!lu_decompose(a, perm, sign)) fail(ErrorCode::Singular, "singular matrix");
  Mat inv(d);
  for (int col = 0; col < d; ++col) {
    std::array<double, kMaxDim> x{};
    x[std::size_t(perm[0])] = 0.0;
    // forward solve L y = P e_col
    std::array<double, kMaxDim> y{};
    for (int i = 0; i < d; ++i) {
      double v = (perm[std::size_t(i)] == col) ? 1.0 : 0.0;
      for (int j = 0; j < i; ++j) v -= a.at(i, j) * y[std::size_t(j)];
      y[std::size_t(i)] = v;
    }
    // back solve U x = y
    for (int i = d - 1; i >= 0; --i) {
      double v = y[std::size_t(i)];
      for (int j = i + 1; j < d; ++j) v -= a.at(i, j) * x[std::size_t(j)];
      x[std::size_t(i)] = v / a.at(i, i);
    }
    for (int i = 0; i < d; ++i) inv.at(i, col) = x[std::size_t(i)];
  }
  return inv;
}

}  // namespace svp
