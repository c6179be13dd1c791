#pragma once

// Generators for positive bases with maximal cosine measure over the family of
// bases made of pairwise orthogonal minimal blocks, plus composition of
// general partitions with critical-vector shifts.

#include <cstddef>
#include <vector>

#include "posbasis/matkernel.hpp"
#include "posbasis/partition.hpp"

namespace posbasis {

struct PositiveBasis {
    Mat columns;
    Partition partition;
};

/// Regular simplex: m+1 unit columns in R^ambient supported on coordinates
/// offset..offset+m-1, pairwise dot products -1/m and zero column sum.
/// Throws DimensionError.
Mat optimal_minimal(std::size_t m, std::size_t ambient, std::size_t offset = 0);

/// [I_n, -I_n] with n one-dimensional blocks {e_i, -e_i}.
PositiveBasis maximal(std::size_t n);

/// Block dimensions that minimise sum m_i^2 subject to sum m_i = n with s-n
/// positive parts: floor(n/(s-n)) repeated, then the ceil blocks last.
/// Throws SizeOutOfRange unless n+1 <= s <= 2n.
std::vector<std::size_t> dims_for(std::size_t n, std::size_t s);

/// Block-diagonal assembly of regular simplices with dims_for(n, s).
PositiveBasis optimal_intermediate(std::size_t n, std::size_t s);

/// 1 / sqrt((s-n-r) floor(n/(s-n))^2 + r ceil(n/(s-n))^2), r = n mod (s-n).
double cm_formula(std::size_t n, std::size_t s);

/// prod (m_i + 1).
std::size_t count_bases(const Partition& part);

struct ComposeBlock {
    Mat columns;          // minimal positive basis of an m-dimensional subspace of R^n
    Vec critical_vector;  // shift added to every column; empty or zero for none
};

struct ComposeOptions {
    bool normalize = true;
};

/// Concatenates D_1, D_2 + c_1, ..., D_q + c_{q-1}. A nonzero c_1 is checked
/// against the first block with is_critical_vector_minimal; later shifts are
/// only checked through the final positive-basis test.
/// Throws InvalidBlock, CriticalVectorRejected or CompositionNotPositiveBasis.
PositiveBasis compose_partition(const std::vector<ComposeBlock>& blocks,
                                const ComposeOptions& options = {});

/// Recovers the block structure of a basis built from pairwise orthogonal
/// minimal blocks: connected components of the |d_i^T d_j| > 1e-9 graph.
/// Throws NotOmegaPlus.
Partition detect_partition_orthogonal(const Mat& d);

/// T D with T orthonormal and (T D) e_1 = w. Throws NotUnit.
Mat realign(const Mat& d, std::span<const double> w);

}  // namespace posbasis
