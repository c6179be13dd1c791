#include "posbasis/spanning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "posbasis/error.hpp"

namespace posbasis {
namespace {

// Dense phase-1 tableau over [A | I] with Bland's rule.
class PhaseOneTableau {
public:
    PhaseOneTableau(const Mat& a, const Vec& rhs, double pivot_tol)
        : m_(a.rows()), k_(a.cols()), width_(k_ + m_), pivot_tol_(pivot_tol),
          t_(m_, width_), rhs_(m_), sign_(m_), basis_(m_), reduced_(width_, 0.0) {
        for (std::size_t i = 0; i < m_; ++i) {
            sign_[i] = rhs[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < k_; ++j) t_(i, j) = sign_[i] * a(i, j);
            t_(i, k_ + i) = 1.0;
            rhs_[i] = sign_[i] * rhs[i];
            basis_[i] = k_ + i;
        }
        for (std::size_t j = 0; j < k_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m_; ++i) s += t_(i, j);
            reduced_[j] = -s;
        }
    }

    // Returns false if no improving column remains.
    bool step() {
        std::size_t enter = width_;
        for (std::size_t j = 0; j < width_; ++j) {
            if (reduced_[j] < -pivot_tol_) {
                enter = j;
                break;
            }
        }
        if (enter == width_) return false;

        std::size_t leave = m_;
        double best = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (t_(i, enter) <= pivot_tol_) continue;
            const double ratio = rhs_[i] / t_(i, enter);
            if (leave == m_ || ratio < best - 1e-15 ||
                (std::abs(ratio - best) <= 1e-15 && basis_[i] < basis_[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m_) {
            // Phase 1 is bounded below by zero, so this is a numerical breakdown.
            throw Error(ErrorCode::NumericalFailure, "no leaving row in phase-1 simplex");
        }
        pivot(leave, enter);
        return true;
    }

    double infeasibility() const {
        double z = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= k_) z += rhs_[i];
        return z;
    }

    Vec primal() const {
        Vec y(k_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < k_) y[basis_[i]] = std::max(0.0, rhs_[i]);
        return y;
    }

    // Simplex multipliers pi = c_B B^{-1} read off the artificial columns,
    // mapped back through the row sign flips.
    Vec farkas() const {
        Vec y(m_);
        for (std::size_t i = 0; i < m_; ++i) y[i] = sign_[i] * (1.0 - reduced_[k_ + i]);
        return y;
    }

private:
    void pivot(std::size_t row, std::size_t col) {
        const double p = t_(row, col);
        for (std::size_t j = 0; j < width_; ++j) t_(row, j) /= p;
        rhs_[row] /= p;
        t_(row, col) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double f = t_(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) t_(i, j) -= f * t_(row, j);
            t_(i, col) = 0.0;
            rhs_[i] -= f * rhs_[row];
        }
        const double f = reduced_[col];
        for (std::size_t j = 0; j < width_; ++j) reduced_[j] -= f * t_(row, j);
        reduced_[col] = 0.0;
        basis_[row] = col;
    }

    std::size_t m_, k_, width_;
    double pivot_tol_;
    Mat t_;
    Vec rhs_;
    Vec sign_;
    std::vector<std::size_t> basis_;
    Vec reduced_;
};

double abs_sum(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

}  // namespace

LpResult lp_nonneg_feasible(const Mat& a, std::span<const double> b, double lower,
                            const LpTolerances& tol) {
    const std::size_t m = a.rows();
    const std::size_t k = a.cols();
    if (b.size() != m) throw Error(ErrorCode::DimensionError, "rhs size does not match rows");

    // Shift x = lower + y so that y >= 0.
    Vec shifted(b.begin(), b.end());
    for (std::size_t i = 0; i < m; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) row_sum += a(i, j);
        shifted[i] -= lower * row_sum;
    }
    const double scale = std::max(1.0, abs_sum(shifted));

    LpResult out;
    if (k == 0) {
        out.feasible = abs_sum(shifted) <= tol.residual * scale;
        if (!out.feasible) out.dual = shifted;
        return out;
    }
    if (m == 0) {
        out.feasible = true;
        out.x.assign(k, lower);
        return out;
    }

    PhaseOneTableau tableau(a, shifted, tol.pivot);
    const std::size_t cap = tol.iteration_factor * (m + k);
    std::size_t iter = 0;
    while (tableau.step()) {
        if (++iter > cap) {
            throw Error(ErrorCode::NumericalFailure,
                        "phase-1 simplex exceeded " + std::to_string(cap) + " iterations");
        }
    }

    if (tableau.infeasibility() <= tol.residual * scale) {
        Vec y = tableau.primal();
        out.feasible = true;
        out.x.resize(k);
        for (std::size_t j = 0; j < k; ++j) out.x[j] = lower + y[j];
        const Vec ax = a * out.x;
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(ax[i] - b[i]));
        double x_scale = 1.0;
        for (double xj : out.x) x_scale = std::max(x_scale, std::abs(xj));
        if (worst > tol.residual * x_scale * std::max(1.0, a.max_abs())) {
            throw Error(ErrorCode::NumericalFailure, "feasible point fails residual check");
        }
    } else {
        out.dual = tableau.farkas();
    }
    return out;
}

bool SpanCertificate::verify(const Mat& s) const {
    if (kind == CertificateKind::PositiveCoefficients) {
        if (alpha.size() != s.cols()) return false;
        const Vec r = s * alpha;
        if (norm(r) > 1e-8 * norm(alpha)) return false;
        return std::all_of(alpha.begin(), alpha.end(), [](double x) { return x >= 1.0 - 1e-9; });
    }
    if (witness.size() != s.rows()) return false;
    if (std::abs(norm(witness) - 1.0) > 1e-9) return false;
    for (std::size_t j = 0; j < s.cols(); ++j) {
        if (dot(witness, s.col(j)) < -1e-9) return false;
    }
    return true;
}

bool has_unit_columns(const Mat& s, double tol) {
    for (std::size_t j = 0; j < s.cols(); ++j) {
        if (std::abs(norm(s.col(j)) - 1.0) > tol) return false;
    }
    return true;
}

void require_unit_columns(const Mat& s) {
    for (std::size_t j = 0; j < s.cols(); ++j) {
        const double len = norm(s.col(j));
        if (std::abs(len - 1.0) > 1e-9) {
            throw Error(ErrorCode::NotUnit,
                        "column " + std::to_string(j) + " has norm " + std::to_string(len));
        }
    }
}

Mat normalize_columns(const Mat& s) {
    Mat out = s;
    for (std::size_t j = 0; j < s.cols(); ++j) {
        Vec c = s.col(j);
        const double len = norm(c);
        if (len == 0.0) throw Error(ErrorCode::NotUnit, "zero column " + std::to_string(j));
        for (double& x : c) x /= len;
        out.set_col(j, c);
    }
    return out;
}

SpanResult is_positive_spanning(const Mat& s) {
    require_unit_columns(s);
    const std::size_t n = s.rows();
    SpanResult out;
    if (rank(s) < n) {
        const Mat comp = orthogonal_complement(s);
        out.certificate.kind = CertificateKind::SeparatingVector;
        out.certificate.witness = comp.col(0);
        return out;
    }
    const Vec zero(n, 0.0);
    LpResult lp = lp_nonneg_feasible(s, zero, 1.0);
    if (lp.feasible) {
        out.positive_spanning = true;
        out.certificate.kind = CertificateKind::PositiveCoefficients;
        out.certificate.alpha = std::move(lp.x);
        return out;
    }
    // y^T d_i <= 0 for all i, so -y separates.
    Vec w = std::move(lp.dual);
    const double len = norm(w);
    for (double& x : w) x = -x / len;
    out.certificate.kind = CertificateKind::SeparatingVector;
    out.certificate.witness = std::move(w);
    return out;
}

bool is_positively_independent(const Mat& s) {
    require_unit_columns(s);
    for (std::size_t i = 0; i < s.cols(); ++i) {
        const std::size_t drop[] = {i};
        const Mat rest = s.without_columns(drop);
        if (lp_nonneg_feasible(rest, s.col(i), 0.0).feasible) return false;
    }
    return true;
}

bool is_positive_basis(const Mat& s) {
    if (!is_positive_spanning(s).positive_spanning) return false;
    if (!is_positively_independent(s)) return false;
    const std::size_t n = s.rows();
    if (s.cols() < n + 1 || s.cols() > 2 * n) {
        throw std::logic_error("positive basis of R^" + std::to_string(n) + " with " +
                               std::to_string(s.cols()) + " vectors");
    }
    return true;
}

bool is_minimal_positive_basis_of_span(const Mat& d) {
    const std::size_t r = rank(d);
    if (r == 0 || d.cols() != r + 1) return false;
    const Vec zero(d.rows(), 0.0);
    return lp_nonneg_feasible(d, zero, 1.0).feasible;
}

bool is_critical_vector_minimal(const Mat& d, std::span<const double> c) {
    if (c.size() != d.rows()) {
        throw Error(ErrorCode::DimensionError, "critical vector dimension mismatch");
    }
    if (!is_minimal_positive_basis_of_span(d)) {
        throw Error(ErrorCode::NotMinimalPositiveBasis, "block is not a minimal positive basis of its span");
    }
    if (norm(c) <= 1e-12) return true;
    Vec neg_c(c.begin(), c.end());
    for (double& x : neg_c) x = -x;
    const std::size_t s = d.cols();
    bool critical = false;
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j) {
            const std::size_t drop[] = {i, j};
            const Mat rest = d.without_columns(drop);
            if (rest.cols() == 0) continue;
            if (lp_nonneg_feasible(rest, neg_c, 0.0).feasible) critical = true;
        }
    return critical;
}

}  // namespace posbasis
