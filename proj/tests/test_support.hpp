#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "posbasis/construct.hpp"
#include "posbasis/error.hpp"
#include "posbasis/matkernel.hpp"
#include "posbasis/spanning.hpp"

namespace testing {

using posbasis::Mat;
using posbasis::Vec;

inline Mat random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = g(rng);
    return out;
}

// Gram-Schmidt on a Gaussian matrix, run twice for accuracy.
inline Mat random_orthonormal(std::size_t n, std::mt19937_64& rng) {
    Mat q = random_gaussian(n, n, rng);
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < n; ++j) {
            Vec v = q.col(j);
            for (std::size_t k = 0; k < j; ++k) {
                const Vec e = q.col(k);
                const double c = posbasis::dot(v, e);
                for (std::size_t i = 0; i < n; ++i) v[i] -= c * e[i];
            }
            const double len = posbasis::norm(v);
            for (double& x : v) x /= len;
            q.set_col(j, v);
        }
    return q;
}

inline Vec random_unit(std::size_t n, std::mt19937_64& rng) {
    Vec v = random_gaussian(n, 1, rng).col(0);
    const double len = posbasis::norm(v);
    for (double& x : v) x /= len;
    return v;
}

// Random composition of n into q positive parts.
inline std::vector<std::size_t> random_dims(std::size_t n, std::size_t q, std::mt19937_64& rng) {
    std::vector<std::size_t> dims(q, 1);
    std::uniform_int_distribution<std::size_t> pick(0, q - 1);
    for (std::size_t extra = n - q; extra > 0; --extra) ++dims[pick(rng)];
    return dims;
}

// Unit minimal positive basis of span(v_1..v_m): v_1..v_m, -sum a_k v_k.
inline Mat random_minimal_block(const std::vector<Vec>& span, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> weight(0.2, 2.0);
    std::vector<Vec> cols = span;
    Vec last(span.front().size(), 0.0);
    for (const Vec& v : span) {
        const double a = weight(rng);
        for (std::size_t i = 0; i < v.size(); ++i) last[i] -= a * v[i];
    }
    cols.push_back(last);
    return posbasis::normalize_columns(Mat::from_columns(cols));
}

// Minimal blocks over the column groups of `frame`.
inline std::vector<posbasis::ComposeBlock> random_blocks(const Mat& frame, const std::vector<std::size_t>& dims,
                                                         std::mt19937_64& rng) {
    std::vector<posbasis::ComposeBlock> blocks;
    std::size_t next = 0;
    for (std::size_t m : dims) {
        std::vector<Vec> span;
        for (std::size_t k = 0; k < m; ++k) span.push_back(frame.col(next++));
        blocks.push_back({random_minimal_block(span, rng), {}});
    }
    return blocks;
}

// Nonzero critical vector of a minimal block with m >= 2: minus a positive
// combination of the block minus two of its columns.
inline Vec random_critical(const Mat& block, double scale, std::mt19937_64& rng) {
    const std::size_t cols = block.cols();
    std::uniform_int_distribution<std::size_t> pick(0, cols - 1);
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    std::uniform_real_distribution<double> beta(0.1, 1.0);
    Vec c(block.rows(), 0.0);
    for (std::size_t k = 0; k < cols; ++k) {
        if (k == i || k == j) continue;
        const double b = scale * beta(rng);
        for (std::size_t r = 0; r < block.rows(); ++r) c[r] -= b * block(r, k);
    }
    return c;
}

struct RandomBasisOptions {
    bool orthogonal_blocks = false;
    bool critical_shift = false;
    bool realign = true;
};

// Random positive basis of R^n with s columns built by compose_partition.
inline posbasis::PositiveBasis random_positive_basis(std::size_t n, std::size_t s, std::mt19937_64& rng,
                                                     const RandomBasisOptions& opt = {}) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        const std::vector<std::size_t> dims = random_dims(n, s - n, rng);
        const Mat frame = opt.orthogonal_blocks ? random_orthonormal(n, rng) : random_gaussian(n, n, rng);
        if (posbasis::rank(frame) != n) continue;
        auto blocks = random_blocks(frame, dims, rng);
        if (opt.critical_shift && blocks.size() > 1 && dims.front() >= 2) {
            blocks[1].critical_vector = random_critical(blocks[0].columns, 0.5, rng);
        }
        try {
            posbasis::PositiveBasis pb = posbasis::compose_partition(blocks);
            if (opt.realign) {
                const Mat q = random_orthonormal(n, rng);
                pb.columns = q * pb.columns;
                for (auto& b : pb.partition.blocks) b.critical_vector = q * b.critical_vector;
            }
            return pb;
        } catch (const posbasis::Error&) {
        }
    }
    throw std::runtime_error("could not build a random positive basis");
}

}  // namespace testing
