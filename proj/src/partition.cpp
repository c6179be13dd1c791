#include "posbasis/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "posbasis/error.hpp"
#include "posbasis/spanning.hpp"

namespace posbasis {

std::vector<std::size_t> Partition::dims() const {
    std::vector<std::size_t> out;
    out.reserve(blocks.size());
    for (const PartitionBlock& b : blocks) out.push_back(b.m);
    return out;
}

bool Partition::has_zero_critical_vectors(double tol) const {
    return std::all_of(blocks.begin(), blocks.end(), [tol](const PartitionBlock& b) {
        return std::all_of(b.critical_vector.begin(), b.critical_vector.end(),
                           [tol](double x) { return std::abs(x) <= tol; });
    });
}

void check_partition_shape(const Partition& part) {
    auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidPartition, why); };
    if (part.blocks.empty()) fail("no blocks");
    if (part.s < part.n + 1 || part.blocks.size() != part.s - part.n) {
        fail("block count must equal s - n");
    }
    std::size_t dim_sum = 0;
    std::size_t col_sum = 0;
    std::vector<bool> seen(part.s, false);
    for (const PartitionBlock& b : part.blocks) {
        if (b.m < 1 || b.m > part.n) fail("block dimension out of range");
        if (b.column_indices.size() != b.m + 1) fail("block must hold m + 1 columns");
        if (!b.critical_vector.empty() && b.critical_vector.size() != part.n) {
            fail("critical vector has the wrong dimension");
        }
        for (std::size_t j : b.column_indices) {
            if (j >= part.s) fail("column index " + std::to_string(j) + " out of range");
            if (seen[j]) fail("column " + std::to_string(j) + " appears in two blocks");
            seen[j] = true;
        }
        dim_sum += b.m;
        col_sum += b.m + 1;
    }
    if (dim_sum != part.n) fail("block dimensions must sum to n");
    if (col_sum != part.s) fail("block sizes must sum to s");
}

void validate_omega_partition(const Mat& d, const Partition& part) {
    check_partition_shape(part);
    if (part.n != d.rows() || part.s != d.cols()) {
        throw Error(ErrorCode::InvalidPartition, "partition does not match the matrix shape");
    }
    if (!part.has_zero_critical_vectors()) {
        throw Error(ErrorCode::InvalidPartition, "structured evaluation needs zero critical vectors");
    }
    for (std::size_t k = 0; k < part.blocks.size(); ++k) {
        const PartitionBlock& b = part.blocks[k];
        const Mat sub = d.select_columns(b.column_indices);
        if (rank(sub) != b.m || !is_minimal_positive_basis_of_span(sub)) {
            throw Error(ErrorCode::InvalidPartition,
                        "block " + std::to_string(k) + " is not a minimal positive basis of its span");
        }
    }
    if (rank(d) != d.rows()) {
        throw Error(ErrorCode::InvalidPartition, "block spans do not sum directly to R^n");
    }
}

double max_cross_block_dot(const Mat& d, const Partition& part) {
    double worst = 0.0;
    for (std::size_t a = 0; a < part.blocks.size(); ++a)
        for (std::size_t b = a + 1; b < part.blocks.size(); ++b)
            for (std::size_t i : part.blocks[a].column_indices)
                for (std::size_t j : part.blocks[b].column_indices)
                    worst = std::max(worst, std::abs(dot(d.col(i), d.col(j))));
    return worst;
}

bool is_omega_plus_partition(const Mat& d, const Partition& part) {
    try {
        validate_omega_partition(d, part);
    } catch (const Error&) {
        return false;
    }
    return max_cross_block_dot(d, part) <= 1e-9;
}

}  // namespace posbasis
