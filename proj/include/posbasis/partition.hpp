#pragma once

#include <cstddef>
#include <vector>

#include "posbasis/matkernel.hpp"

namespace posbasis {

/// One minimal sub-positive basis of a partition: m+1 columns spanning an
/// m-dimensional subspace, stored after the shift by `critical_vector`.
struct PartitionBlock {
    std::vector<std::size_t> column_indices;
    std::size_t m = 0;
    Vec critical_vector;  // zero for the first block and for every block of an Omega basis

    friend bool operator==(const PartitionBlock&, const PartitionBlock&) = default;
};

struct Partition {
    std::size_t n = 0;
    std::size_t s = 0;
    std::vector<PartitionBlock> blocks;

    std::vector<std::size_t> dims() const;
    bool has_zero_critical_vectors(double tol = 1e-12) const;

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Structural checks only: sum m_i = n, sum (m_i + 1) = s, q = s - n,
/// 1 <= m_i <= n, disjoint indices covering 0..s-1. Throws InvalidPartition.
void check_partition_shape(const Partition& part);

/// Full check that `part` is an Omega partition of D: shape, zero critical
/// vectors, every block a minimal positive basis of an m_i-dimensional span,
/// and the spans summing directly to R^n. Throws InvalidPartition.
void validate_omega_partition(const Mat& d, const Partition& part);

/// Largest |d_i^T d_j| over columns in different blocks.
double max_cross_block_dot(const Mat& d, const Partition& part);

/// Omega partition whose blocks are pairwise orthogonal within 1e-9.
bool is_omega_plus_partition(const Mat& d, const Partition& part);

}  // namespace posbasis
