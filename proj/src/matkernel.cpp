#include "posbasis/matkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "posbasis/error.hpp"

namespace posbasis {
namespace {

void require_finite(const Mat& m, const char* what) {
    if (!m.all_finite()) throw Error(ErrorCode::NonFinite, what);
}

struct LuFactor {
    Mat lu;
    std::vector<std::size_t> perm;
};

LuFactor lu_factor(const Mat& a) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorCode::DimensionError, "LU of a non-square matrix");
    }
    const std::size_t n = a.rows();
    LuFactor f{a, std::vector<std::size_t>(n)};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    const double pivot_floor = 1e-10 * a.max_abs() * static_cast<double>(n);
    Mat& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
        }
        if (!(std::abs(m(p, k)) > pivot_floor)) {
            throw Error(ErrorCode::Singular, "pivot below tolerance at step " + std::to_string(k));
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
            std::swap(f.perm[p], f.perm[k]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = m(i, k) / m(k, k);
            m(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
        }
    }
    return f;
}

Vec lu_solve(const LuFactor& f, std::span<const double> b) {
    const std::size_t n = f.lu.rows();
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * x[j];
        x[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = x[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= f.lu(i, j) * x[j];
        x[i] = acc / f.lu(i, i);
    }
    return x;
}

Mat subtract(const Mat& a, const Mat& b) {
    Mat out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
    return out;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::NotUnit: return "NotUnit";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DimensionError: return "DimensionError";
        case ErrorCode::SizeOutOfRange: return "SizeOutOfRange";
        case ErrorCode::NotPositiveBasis: return "NotPositiveBasis";
        case ErrorCode::InvalidPartition: return "InvalidPartition";
        case ErrorCode::NotMinimalPositiveBasis: return "NotMinimalPositiveBasis";
        case ErrorCode::InvalidBlock: return "InvalidBlock";
        case ErrorCode::CriticalVectorRejected: return "CriticalVectorRejected";
        case ErrorCode::CompositionNotPositiveBasis: return "CompositionNotPositiveBasis";
        case ErrorCode::NotOmegaPlus: return "NotOmegaPlus";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (!std::isfinite(fill)) throw Error(ErrorCode::NonFinite, "non-finite fill value");
}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionError, "entry count does not match rows*cols");
    }
    require_finite(*this, "matrix entries must be finite");
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw Error(ErrorCode::DimensionError, "ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Mat(r, c, std::move(data));
}

Mat Mat::from_columns(const std::vector<Vec>& columns) {
    if (columns.empty()) return Mat();
    const std::size_t n = columns.front().size();
    Mat m(n, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != n) throw Error(ErrorCode::DimensionError, "ragged columns");
        m.set_col(j, columns[j]);
    }
    require_finite(m, "matrix entries must be finite");
    return m;
}

Vec Mat::col(std::size_t c) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
}

void Mat::set_col(std::size_t c, std::span<const double> v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = v[i];
}

Mat Mat::select_columns(std::span<const std::size_t> idx) const {
    Mat out(rows_, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
        for (std::size_t i = 0; i < rows_; ++i) out(i, j) = (*this)(i, idx[j]);
    return out;
}

Mat Mat::without_columns(std::span<const std::size_t> idx) const {
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < cols_; ++j) {
        if (std::find(idx.begin(), idx.end(), j) == idx.end()) keep.push_back(j);
    }
    return select_columns(keep);
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Mat::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionError, "product shape mismatch");
    Mat out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Vec operator*(const Mat& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw Error(ErrorCode::DimensionError, "matvec shape mismatch");
    Vec out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
    return out;
}

Mat hstack(const Mat& a, const Mat& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionError, "hstack row mismatch");
    Mat out(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionError, "shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

Mat gram(const Mat& s) {
    const std::size_t k = s.cols();
    Mat g(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < s.rows(); ++i) acc += s(i, a) * s(i, b);
            g(a, b) = acc;
            g(b, a) = acc;
        }
    return g;
}

Mat invert(const Mat& a) {
    const LuFactor f = lu_factor(a);
    const std::size_t n = a.rows();
    Mat inv(n, n);
    Vec e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        inv.set_col(j, lu_solve(f, e));
    }
    require_finite(inv, "inverse is not finite");
    return inv;
}

Vec solve(const Mat& a, std::span<const double> b) {
    if (b.size() != a.rows()) throw Error(ErrorCode::DimensionError, "rhs size mismatch");
    return lu_solve(lu_factor(a), b);
}

double grand_sum(const Mat& a) {
    double s = 0.0;
    for (double x : a.data()) s += x;
    return s;
}

double default_rank_tol(const Mat& s) {
    return 1e-10 * static_cast<double>(std::max(s.rows(), s.cols()));
}

std::size_t rank(const Mat& s, double tol) {
    const double scale = s.max_abs();
    if (s.empty() || scale == 0.0) return 0;
    const double threshold = tol * scale;

    Mat r = s;
    const std::size_t m = r.rows();
    const std::size_t k = r.cols();
    const std::size_t steps = std::min(m, k);
    std::size_t rk = 0;
    for (std::size_t j = 0; j < steps; ++j) {
        // Pivot on the largest remaining column norm.
        std::size_t p = j;
        double best = -1.0;
        for (std::size_t c = j; c < k; ++c) {
            double nrm2 = 0.0;
            for (std::size_t i = j; i < m; ++i) nrm2 += r(i, c) * r(i, c);
            if (nrm2 > best) {
                best = nrm2;
                p = c;
            }
        }
        if (p != j) {
            for (std::size_t i = 0; i < m; ++i) std::swap(r(i, p), r(i, j));
        }
        const double alpha = std::sqrt(best);
        if (!(alpha > threshold)) break;
        ++rk;

        // Householder vector v = x + sign(x0) ||x|| e_0 on rows j..m-1.
        Vec v(m - j);
        for (std::size_t i = j; i < m; ++i) v[i - j] = r(i, j);
        v[0] += (v[0] >= 0.0 ? alpha : -alpha);
        const double vv = dot(v, v);
        if (vv == 0.0) continue;
        for (std::size_t c = j; c < k; ++c) {
            double proj = 0.0;
            for (std::size_t i = j; i < m; ++i) proj += v[i - j] * r(i, c);
            proj = 2.0 * proj / vv;
            for (std::size_t i = j; i < m; ++i) r(i, c) -= proj * v[i - j];
        }
    }
    return rk;
}

std::size_t rank(const Mat& s) { return rank(s, default_rank_tol(s)); }

Mat block_inverse(const Mat& a, const Mat& b, const Mat& d) {
    const std::size_t k = a.rows();
    const std::size_t l = d.rows();
    if (a.cols() != k || d.cols() != l || b.rows() != l || b.cols() != k) {
        throw Error(ErrorCode::DimensionError, "block shapes do not fit [[A, B^T], [B, D]]");
    }
    const Mat a_inv = invert(a);
    const Mat b_a_inv = b * a_inv;                  // l x k
    const Mat schur = subtract(d, b_a_inv * b.transpose());
    Mat schur_inv(l, l);
    if (l == 1) {
        const double s = schur(0, 0);
        if (!(std::abs(s) > 1e-10 * std::max(1.0, d.max_abs()))) {
            throw Error(ErrorCode::Singular, "scalar Schur complement vanishes");
        }
        schur_inv(0, 0) = 1.0 / s;
    } else {
        schur_inv = invert(schur);
    }

    const Mat lower_left = schur_inv * b_a_inv;     // S^{-1} B A^{-1}
    const Mat upper_left = b_a_inv.transpose() * lower_left;

    Mat g_inv(k + l, k + l);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) g_inv(i, j) = a_inv(i, j) + upper_left(i, j);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            g_inv(k + i, j) = -lower_left(i, j);
            g_inv(j, k + i) = -lower_left(i, j);
        }
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) g_inv(k + i, k + j) = schur_inv(i, j);
    require_finite(g_inv, "block inverse is not finite");
    return g_inv;
}

Mat householder_align(std::span<const double> w) {
    const std::size_t n = w.size();
    if (n == 0) throw Error(ErrorCode::DimensionError, "empty vector");
    const double len = norm(w);
    if (!(std::abs(len - 1.0) <= 1e-9)) {
        throw Error(ErrorCode::NotUnit, "norm " + std::to_string(len));
    }
    // v = e_1 - w; the reflection I - 2 v v^T / (v^T v) swaps e_1 and w.
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = -w[i] / len;
    v[0] += 1.0;
    const double vv = dot(v, v);
    Mat t = Mat::identity(n);
    if (vv <= 1e-30) return t;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t(i, j) -= 2.0 * v[i] * v[j] / vv;
    return t;
}

Mat orthogonal_complement(const Mat& s) {
    const std::size_t n = s.rows();
    std::vector<Vec> basis;
    auto reduce = [&basis](Vec x) {
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& q : basis) {
                const double c = dot(q, x);
                for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * q[i];
            }
        return x;
    };
    const double col_floor = 1e-10 * std::max(1.0, s.max_abs()) * static_cast<double>(n);
    for (std::size_t j = 0; j < s.cols(); ++j) {
        Vec x = reduce(s.col(j));
        const double len = norm(x);
        if (len > col_floor) {
            for (double& xi : x) xi /= len;
            basis.push_back(std::move(x));
        }
    }
    const std::size_t span_dim = basis.size();
    for (std::size_t i = 0; i < n && basis.size() < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        Vec x = reduce(std::move(e));
        const double len = norm(x);
        if (len > 1e-6) {
            for (double& xi : x) xi /= len;
            basis.push_back(std::move(x));
        }
    }
    std::vector<Vec> complement(basis.begin() + static_cast<std::ptrdiff_t>(span_dim), basis.end());
    if (complement.empty()) return Mat(n, 0);
    return Mat::from_columns(complement);
}

}  // namespace posbasis
