#include "expderiv/backends.hpp"

#include <Eigen/Dense>
#include <sstream>

namespace expderiv {

namespace {

Eigen::MatrixXd to_eigen(const Mat<double>& A) {
  Eigen::MatrixXd M(A.rows, A.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) M(i, j) = A.at(i, j);
  return M;
}

// Elimination with minimal-valuation pivoting; returns pivot row for each
// column (or npos) with A and rhs reduced in place.
constexpr std::size_t kNoPivot = static_cast<std::size_t>(-1);

std::vector<std::size_t> eliminate(const PadicBackend& backend, Mat<Padic>& A,
                                   std::vector<Padic>& rhs) {
  std::vector<std::size_t> pivot_of_col(A.cols, kNoPivot);
  std::vector<bool> row_used(A.rows, false);
  for (std::size_t c = 0; c < A.cols; ++c) {
    std::size_t best = kNoPivot;
    long long best_val = 0;
    for (std::size_t r = 0; r < A.rows; ++r) {
      if (row_used[r] || A.at(r, c).is_zeroish()) continue;
      long long v = A.at(r, c).valuation();
      if (best == kNoPivot || v < best_val) {
        best = r;
        best_val = v;
      }
    }
    if (best == kNoPivot) continue;
    pivot_of_col[c] = best;
    row_used[best] = true;
    for (std::size_t r = 0; r < A.rows; ++r) {
      if (r == best || A.at(r, c).is_zeroish()) continue;
      Padic f = A.at(r, c) / A.at(best, c);
      for (std::size_t j = 0; j < A.cols; ++j)
        A.at(r, j) = A.at(r, j) - f * A.at(best, j);
      rhs[r] = rhs[r] - f * rhs[best];
      A.at(r, c) = backend.zero();
    }
  }
  return pivot_of_col;
}

}  // namespace

std::string RealBackend::to_string(Scalar x) const {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::vector<double> linear_solve(const RealBackend&, const Mat<double>& A,
                                 const std::vector<double>& rhs) {
  if (A.rows != A.cols || rhs.size() != A.rows)
    throw ShapeError("linear solve requires a square system");
  Eigen::MatrixXd M = to_eigen(A);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rhs.size()));
  for (std::size_t i = 0; i < rhs.size(); ++i) b(static_cast<Eigen::Index>(i)) = rhs[i];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) throw SingularJacobian("matrix is numerically singular");
  Eigen::VectorXd x = lu.solve(b);
  std::vector<double> out(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) out[i] = x(static_cast<Eigen::Index>(i));
  return out;
}

std::vector<Padic> linear_solve(const PadicBackend& backend, const Mat<Padic>& A,
                                const std::vector<Padic>& rhs) {
  if (A.rows != A.cols || rhs.size() != A.rows)
    throw ShapeError("linear solve requires a square system");
  Mat<Padic> M = A;
  std::vector<Padic> b = rhs;
  auto pivots = eliminate(backend, M, b);
  std::vector<Padic> x(A.cols, backend.zero());
  for (std::size_t c = 0; c < A.cols; ++c) {
    if (pivots[c] == kNoPivot)
      throw SingularJacobian("no unit-bearing pivot in p-adic elimination");
    x[c] = b[pivots[c]] / M.at(pivots[c], c);
  }
  return x;
}

double mat_det(const RealBackend&, const Mat<double>& A) {
  if (A.rows != A.cols) throw ShapeError("determinant of a non-square matrix");
  return to_eigen(A).determinant();
}

Padic mat_det(const PadicBackend& backend, const Mat<Padic>& A) {
  if (A.rows != A.cols) throw ShapeError("determinant of a non-square matrix");
  std::size_t n = A.rows;
  if (n == 0) return backend.from_rational(Rational(1));
  Mat<Padic> M = A;
  Padic det = backend.from_rational(Rational(1));
  std::vector<bool> row_used(n, false);
  int sign = 1;
  std::size_t expected_row = 0;
  for (std::size_t c = 0; c < n; ++c, ++expected_row) {
    std::size_t best = kNoPivot;
    long long best_val = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (row_used[r] || M.at(r, c).is_zeroish()) continue;
      long long v = M.at(r, c).valuation();
      if (best == kNoPivot || v < best_val) {
        best = r;
        best_val = v;
      }
    }
    if (best == kNoPivot) {
      // Column has no certain digits: every expansion term picks one entry
      // per remaining column, so bound the determinant by column minima.
      long long bound = det.valuation();
      for (std::size_t j = c; j < n; ++j) {
        long long col_min = 0;
        bool first = true;
        for (std::size_t r = 0; r < n; ++r) {
          if (row_used[r]) continue;
          long long v = M.at(r, j).valuation();
          if (first || v < col_min) {
            col_min = v;
            first = false;
          }
        }
        bound += col_min;
      }
      return Padic::zero(backend.p).truncated_abs(bound);
    }
    row_used[best] = true;
    if (best != expected_row) sign = -sign;
    det = det * M.at(best, c);
    for (std::size_t r = 0; r < n; ++r) {
      if (row_used[r] || M.at(r, c).is_zeroish()) continue;
      Padic f = M.at(r, c) / M.at(best, c);
      for (std::size_t j = c; j < n; ++j) M.at(r, j) = M.at(r, j) - f * M.at(best, j);
      M.at(r, c) = backend.zero();
    }
  }
  if (sign < 0) det = -det;
  return det;
}

bool full_row_rank(const RealBackend&, const Mat<double>& A, const ToleranceSpec& tol) {
  if (A.rows == 0) return true;
  if (A.rows > A.cols) return false;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(A));
  return svd.singularValues()(static_cast<Eigen::Index>(A.rows - 1)) >= tol.eps_reg;
}

bool full_row_rank(const PadicBackend& backend, const Mat<Padic>& A, const ToleranceSpec& tol) {
  if (A.rows == 0) return true;
  if (A.rows > A.cols) return false;
  // Certified regular when some maximal minor has low enough valuation.
  std::vector<std::size_t> pick(A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) pick[i] = i;
  auto minor_regular = [&]() {
    Mat<Padic> M(A.rows, A.rows, backend.zero());
    for (std::size_t i = 0; i < A.rows; ++i)
      for (std::size_t j = 0; j < A.rows; ++j) M.at(i, j) = A.at(i, pick[j]);
    return backend.det_regular(mat_det(backend, M), tol);
  };
  while (true) {
    if (minor_regular()) return true;
    // next combination of A.rows columns out of A.cols
    std::size_t i = A.rows;
    while (i > 0) {
      --i;
      if (pick[i] != i + A.cols - A.rows) {
        ++pick[i];
        for (std::size_t j = i + 1; j < A.rows; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) return false;
    }
  }
}

std::vector<double> consistent_solve(const RealBackend&, const Mat<double>& A,
                                     const std::vector<double>& rhs) {
  if (rhs.size() != A.rows) throw ShapeError("solve dimension mismatch");
  Eigen::MatrixXd M = to_eigen(A);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rhs.size()));
  for (std::size_t i = 0; i < rhs.size(); ++i) b(static_cast<Eigen::Index>(i)) = rhs[i];
  Eigen::VectorXd x = M.colPivHouseholderQr().solve(b);
  std::vector<double> out(A.cols);
  for (std::size_t j = 0; j < A.cols; ++j) out[j] = x(static_cast<Eigen::Index>(j));
  return out;
}

std::vector<Padic> consistent_solve(const PadicBackend& backend, const Mat<Padic>& A,
                                    const std::vector<Padic>& rhs) {
  if (rhs.size() != A.rows) throw ShapeError("solve dimension mismatch");
  Mat<Padic> M = A;
  std::vector<Padic> b = rhs;
  auto pivots = eliminate(backend, M, b);
  std::vector<Padic> x(A.cols, backend.zero());
  for (std::size_t c = 0; c < A.cols; ++c) {
    if (pivots[c] == kNoPivot) {
      x[c] = backend.from_rational(Rational(0));
      continue;
    }
    x[c] = b[pivots[c]] / M.at(pivots[c], c);
  }
  return x;
}

}  // namespace expderiv
