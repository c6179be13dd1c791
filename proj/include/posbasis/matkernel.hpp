#pragma once

// Small dense linear-algebra kernel. Matrices are row-major and hold the
// direction sets as columns, so an n x s matrix is s vectors of R^n.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace posbasis {

using Vec = std::vector<double>;

class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
    // Throws NonFinite if any entry is NaN/Inf, DimensionError on size mismatch.
    Mat(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    static Mat identity(std::size_t n);
    static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Mat from_columns(const std::vector<Vec>& columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> data() const noexcept { return data_; }

    Vec col(std::size_t c) const;
    void set_col(std::size_t c, std::span<const double> v);
    Mat select_columns(std::span<const std::size_t> idx) const;
    Mat without_columns(std::span<const std::size_t> idx) const;
    Mat transpose() const;

    bool all_finite() const;
    double max_abs() const;

    friend Mat operator*(const Mat& a, const Mat& b);
    friend Vec operator*(const Mat& a, std::span<const double> x);
    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Mat hstack(const Mat& a, const Mat& b);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);
double max_abs_diff(const Mat& a, const Mat& b);

/// Gram matrix S^T S, symmetrized so that G == G^T exactly.
Mat gram(const Mat& s);

/// Inverse via LU with partial pivoting. Throws Singular when a pivot falls
/// below 1e-10 * max|A| * n.
Mat invert(const Mat& a);

/// Solves A x = b with the same LU factorization and singularity rule as invert().
Vec solve(const Mat& a, std::span<const double> b);

/// 1^T A 1.
double grand_sum(const Mat& a);

/// Default relative tolerance for rank(): 1e-10 * max(rows, cols).
double default_rank_tol(const Mat& s);

/// Numerical rank from Householder QR with column pivoting: the number of
/// |R_kk| exceeding tol * max|S_ij|.
std::size_t rank(const Mat& s, double tol);
std::size_t rank(const Mat& s);

/// Inverse of G = [[A, B^T], [B, D]] assembled from the Schur complement
/// S = D - B A^{-1} B^T:
///
///   G^{-1} = [[A^{-1} + A^{-1} B^T S^{-1} B A^{-1},  -A^{-1} B^T S^{-1}],
///             [-S^{-1} B A^{-1},                       S^{-1}          ]]
///
/// A is k x k, B is l x k, D is l x l.
Mat block_inverse(const Mat& a, const Mat& b, const Mat& d);

/// Orthonormal T (a Householder reflection, or I) with T e_1 = w.
/// Requires | ||w|| - 1 | <= 1e-9, otherwise NotUnit.
Mat householder_align(std::span<const double> w);

/// An orthonormal basis of the orthogonal complement of the column span of S
/// (as columns of the result; may have zero columns).
Mat orthogonal_complement(const Mat& s);

}  // namespace posbasis
