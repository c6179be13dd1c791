#pragma once

// Positive spanning, positive independence and positive-basis tests, each
// backed by a phase-1 simplex feasibility solver that returns checkable
// certificates.

#include <cstddef>

#include "posbasis/matkernel.hpp"

namespace posbasis {

struct LpTolerances {
    double residual = 1e-8;
    double pivot = 1e-10;
    // Iteration cap is this factor times (rows + cols).
    std::size_t iteration_factor = 50;
};

struct LpResult {
    bool feasible = false;
    Vec x;     // feasible point, x >= lower componentwise, A x = b
    Vec dual;  // Farkas vector y: y^T A <= 0 and y^T (b - lower * A 1) > 0
};

/// Decides whether some x with A x = b and x >= lower exists.
/// Throws NumericalFailure if the iteration cap is hit.
LpResult lp_nonneg_feasible(const Mat& a, std::span<const double> b, double lower,
                            const LpTolerances& tol = {});

enum class CertificateKind { PositiveCoefficients, SeparatingVector };

struct SpanCertificate {
    CertificateKind kind = CertificateKind::SeparatingVector;
    Vec alpha;    // PositiveCoefficients: S alpha = 0, alpha >= 1
    Vec witness;  // SeparatingVector: unit, witness^T d_i >= 0 for every column

    /// Re-checks the certificate inequalities against S.
    bool verify(const Mat& s) const;
};

struct SpanResult {
    bool positive_spanning = false;
    SpanCertificate certificate;
};

/// Throws NotUnit unless every column has norm 1 within 1e-9.
void require_unit_columns(const Mat& s);
bool has_unit_columns(const Mat& s, double tol = 1e-9);
Mat normalize_columns(const Mat& s);

SpanResult is_positive_spanning(const Mat& s);
bool is_positively_independent(const Mat& s);

/// Positive spanning and positively independent. A true result with a size
/// outside [n+1, 2n] throws std::logic_error: that would be a solver defect.
bool is_positive_basis(const Mat& s);

/// True when d_1..d_{m+1} positively span their own m-dimensional span.
bool is_minimal_positive_basis_of_span(const Mat& d);

/// Critical-vector membership for a minimal positive basis D of its span:
/// c is critical iff -c lies in pspan(D \ {d_i, d_j}) for some pair i != j.
/// The zero vector is always critical. Throws NotMinimalPositiveBasis.
bool is_critical_vector_minimal(const Mat& d, std::span<const double> c);

}  // namespace posbasis
