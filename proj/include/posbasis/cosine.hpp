#pragma once

// Cosine measure of a positive basis by enumerating the bases of R^n it
// contains. For every basis B the equal-angle vector u_B = gamma_B B^{-T} 1
// with gamma_B = 1 / sqrt(1^T G(B)^{-1} 1) is formed; the cosine measure is the
// smallest value of max_i u_B^T d_i over all B.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "posbasis/matkernel.hpp"
#include "posbasis/partition.hpp"

namespace posbasis {

using IndexList = std::vector<std::size_t>;

struct BasisEvaluation {
    IndexList column_indices;
    double gamma = 0.0;
    Vec u;
    Vec p;  // u^T d_j for every column of D
    double p_max = 0.0;
};

struct CmResult {
    double value = 0.0;
    std::vector<Vec> cosine_vectors;
    std::vector<IndexList> active_sets;  // one per cosine vector
    std::vector<IndexList> argmin_bases;
    std::size_t bases_evaluated = 0;
};

inline constexpr double kTieTolerance = 1e-8;
inline constexpr double kCosineVectorDedup = 1e-6;
inline constexpr double kActiveTolerance = 1e-8;

/// Calls visit(idx) for every rank-n column subset of size n, in
/// lexicographic order.
void for_each_basis(const Mat& d, const std::function<void(const IndexList&)>& visit);
std::vector<IndexList> enumerate_bases(const Mat& d);

/// gamma, u and the dot-product vector for the basis D[:, idx].
/// Throws Singular if the subset is rank deficient.
BasisEvaluation evaluate_basis(const Mat& d, const IndexList& idx);

/// Full enumeration over every basis. Rejects inputs that are not positive
/// bases with NotPositiveBasis (NotUnit for non-unit columns).
CmResult cosine_measure_full(const Mat& d);

/// Enumeration restricted to the prod(m_i + 1) bases obtained by dropping one
/// column per block of an Omega partition. Non-basis dot products are known
/// to be non-positive there, so only gamma_B is compared.
/// Throws InvalidPartition.
CmResult cosine_measure_structured(const Mat& d, const Partition& part);

/// Monte Carlo upper bound: min over `samples` seeded uniform unit vectors u
/// of max_i u^T d_i / ||d_i||. Sample k depends only on (seed, k).
double cosine_measure_sampled(const Mat& d, std::uint64_t samples, std::uint64_t seed);

/// Indices i with |d_i^T u - cm_value| <= 1e-8. Throws NotUnit.
IndexList active_set(const Mat& d, std::span<const double> u, double cm_value);

struct GrandSumSplit {
    double lhs = 0.0;  // 1^T G([B2 | b1])^{-1} 1
    double rhs = 0.0;  // 1^T G2^{-1} 1 + c (1^T [-G2^{-1} v; 1])^2
    double two_block = 0.0;  // 1^T G2^{-1} 1
    double v_norm = 0.0;
};

/// Grand sum of G_3^{-1} for B_3 = [B2 | b1] in R^3, computed directly and
/// through the rank-one split with v = B2^T b1 and c = 1 / (1 - v^T G2^{-1} v).
GrandSumSplit grand_sum_decomposition_check(const Mat& b2, std::span<const double> b1);

}  // namespace posbasis
