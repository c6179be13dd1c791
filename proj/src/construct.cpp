#include "posbasis/construct.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "posbasis/error.hpp"
#include "posbasis/spanning.hpp"

namespace posbasis {
namespace {

void require_size_range(std::size_t n, std::size_t s) {
    if (n == 0 || s < n + 1 || s > 2 * n) {
        throw Error(ErrorCode::SizeOutOfRange, "need n >= 1 and n+1 <= s <= 2n, got n=" +
                                                   std::to_string(n) + " s=" + std::to_string(s));
    }
}

bool is_zero(const Vec& v) {
    for (double x : v)
        if (std::abs(x) > 1e-12) return false;
    return true;
}

// Minimal union-find over column indices.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

Mat optimal_minimal(std::size_t m, std::size_t ambient, std::size_t offset) {
    if (m < 1 || offset + m > ambient) {
        throw Error(ErrorCode::DimensionError, "simplex of dimension " + std::to_string(m) +
                                                   " does not fit at offset " + std::to_string(offset) +
                                                   " in R^" + std::to_string(ambient));
    }
    // Vertex i of the standard simplex in R^{m+1}, centred, in the Helmert
    // frame f_k = (1, ..., 1, -k, 0, ...)/sqrt(k(k+1)) of {x : sum x = 0}.
    const double scale = std::sqrt(static_cast<double>(m + 1) / static_cast<double>(m));
    Mat out(ambient, m + 1);
    for (std::size_t k = 1; k <= m; ++k) {
        const double kk = static_cast<double>(k);
        const double inv = 1.0 / std::sqrt(kk * (kk + 1.0));
        for (std::size_t i = 0; i < k; ++i) out(offset + k - 1, i) = scale * inv;
        out(offset + k - 1, k) = -scale * kk * inv;
    }
    return out;
}

PositiveBasis maximal(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::DimensionError, "n must be positive");
    PositiveBasis out{Mat(n, 2 * n), Partition{n, 2 * n, {}}};
    for (std::size_t i = 0; i < n; ++i) {
        out.columns(i, i) = 1.0;
        out.columns(i, n + i) = -1.0;
        out.partition.blocks.push_back(PartitionBlock{{i, n + i}, 1, Vec(n, 0.0)});
    }
    return out;
}

std::vector<std::size_t> dims_for(std::size_t n, std::size_t s) {
    require_size_range(n, s);
    const std::size_t q = s - n;
    const std::size_t floor_dim = n / q;
    const std::size_t r = n % q;
    std::vector<std::size_t> dims(q - r, floor_dim);
    dims.insert(dims.end(), r, floor_dim + 1);
    return dims;
}

PositiveBasis optimal_intermediate(std::size_t n, std::size_t s) {
    const std::vector<std::size_t> dims = dims_for(n, s);
    PositiveBasis out{Mat(n, s), Partition{n, s, {}}};
    std::size_t row = 0;
    std::size_t col = 0;
    for (std::size_t m : dims) {
        const Mat block = optimal_minimal(m, n, row);
        PartitionBlock meta{{}, m, Vec(n, 0.0)};
        for (std::size_t j = 0; j < block.cols(); ++j) {
            out.columns.set_col(col, block.col(j));
            meta.column_indices.push_back(col++);
        }
        out.partition.blocks.push_back(std::move(meta));
        row += m;
    }
    return out;
}

double cm_formula(std::size_t n, std::size_t s) {
    require_size_range(n, s);
    const std::size_t q = s - n;
    const double lo = static_cast<double>(n / q);
    const double hi = static_cast<double>((n + q - 1) / q);
    const double r = static_cast<double>(n % q);
    return 1.0 / std::sqrt((static_cast<double>(q) - r) * lo * lo + r * hi * hi);
}

std::size_t count_bases(const Partition& part) {
    std::size_t total = 1;
    for (const PartitionBlock& b : part.blocks) total *= b.m + 1;
    return total;
}

PositiveBasis compose_partition(const std::vector<ComposeBlock>& blocks,
                                const ComposeOptions& options) {
    auto invalid = [](std::size_t k, const std::string& why) {
        throw Error(ErrorCode::InvalidBlock, "block " + std::to_string(k) + ": " + why);
    };
    if (blocks.empty()) throw Error(ErrorCode::InvalidBlock, "no blocks");
    const std::size_t n = blocks.front().columns.rows();

    Mat unshifted(n, 0);
    std::size_t dim_sum = 0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const ComposeBlock& b = blocks[k];
        if (b.columns.rows() != n) invalid(k, "ambient dimension mismatch");
        if (!has_unit_columns(b.columns)) invalid(k, "columns must be unit vectors");
        if (!is_minimal_positive_basis_of_span(b.columns)) {
            invalid(k, "not a minimal positive basis of its span");
        }
        if (!b.critical_vector.empty() && b.critical_vector.size() != n) {
            invalid(k, "critical vector dimension mismatch");
        }
        dim_sum += b.columns.cols() - 1;
        unshifted = hstack(unshifted, b.columns);
    }
    if (dim_sum != n || rank(unshifted) != n) {
        throw Error(ErrorCode::InvalidBlock, "block spans must form a direct sum equal to R^n");
    }

    if (!is_zero(blocks.front().critical_vector)) {
        throw Error(ErrorCode::CriticalVectorRejected, "the first block takes no shift");
    }
    if (blocks.size() > 1 && !is_zero(blocks[1].critical_vector) &&
        !is_critical_vector_minimal(blocks.front().columns, blocks[1].critical_vector)) {
        throw Error(ErrorCode::CriticalVectorRejected,
                    "shift of block 1 is not a critical vector of block 0");
    }

    PositiveBasis out{Mat(n, unshifted.cols()), Partition{n, unshifted.cols(), {}}};
    std::size_t col = 0;
    for (const ComposeBlock& b : blocks) {
        const Vec shift = b.critical_vector.empty() ? Vec(n, 0.0) : b.critical_vector;
        PartitionBlock meta{{}, b.columns.cols() - 1, shift};
        for (std::size_t j = 0; j < b.columns.cols(); ++j) {
            Vec c = b.columns.col(j);
            for (std::size_t i = 0; i < n; ++i) c[i] += shift[i];
            const double len = norm(c);
            if (len <= 1e-12) {
                throw Error(ErrorCode::CompositionNotPositiveBasis, "shift cancels a column");
            }
            if (options.normalize)
                for (double& x : c) x /= len;
            out.columns.set_col(col, c);
            meta.column_indices.push_back(col++);
        }
        out.partition.blocks.push_back(std::move(meta));
    }

    // Positive spanning and independence are invariant under column scaling.
    const Mat unit = options.normalize ? out.columns : normalize_columns(out.columns);
    if (!is_positive_basis(unit)) {
        throw Error(ErrorCode::CompositionNotPositiveBasis, "composed set is not a positive basis");
    }
    return out;
}

Partition detect_partition_orthogonal(const Mat& d) {
    require_unit_columns(d);
    const std::size_t s = d.cols();
    DisjointSets sets(s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
            if (std::abs(dot(d.col(i), d.col(j))) > 1e-9) sets.unite(i, j);

    Partition part{d.rows(), s, {}};
    std::vector<std::size_t> block_of_root(s, s);
    for (std::size_t j = 0; j < s; ++j) {
        const std::size_t root = sets.find(j);
        if (block_of_root[root] == s) {
            block_of_root[root] = part.blocks.size();
            part.blocks.push_back(PartitionBlock{{}, 0, Vec(d.rows(), 0.0)});
        }
        part.blocks[block_of_root[root]].column_indices.push_back(j);
    }

    std::size_t dim_sum = 0;
    for (std::size_t k = 0; k < part.blocks.size(); ++k) {
        PartitionBlock& b = part.blocks[k];
        const Mat sub = d.select_columns(b.column_indices);
        if (!is_minimal_positive_basis_of_span(sub)) {
            throw Error(ErrorCode::NotOmegaPlus,
                        "component " + std::to_string(k) + " is not a minimal positive basis of its span");
        }
        b.m = b.column_indices.size() - 1;
        dim_sum += b.m;
    }
    if (dim_sum != d.rows()) {
        throw Error(ErrorCode::NotOmegaPlus, "component spans do not add up to R^n");
    }
    return part;
}

Mat realign(const Mat& d, std::span<const double> w) {
    if (w.size() != d.rows()) throw Error(ErrorCode::DimensionError, "alignment vector dimension mismatch");
    // H(d_1) maps d_1 to e_1, H(w) maps e_1 to w.
    const Mat t = householder_align(w) * householder_align(d.col(0));
    return t * d;
}

}  // namespace posbasis
