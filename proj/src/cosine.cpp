#include "posbasis/cosine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>

#include "posbasis/error.hpp"
#include "posbasis/parallel.hpp"
#include "posbasis/spanning.hpp"

namespace posbasis {
namespace {

std::vector<IndexList> all_combinations(std::size_t s, std::size_t n) {
    std::vector<IndexList> out;
    if (n > s) return out;
    IndexList idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        std::size_t i = n;
        while (i > 0 && idx[i - 1] == s - n + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

struct EqualAngle {
    double gamma = 0.0;
    Vec u;
};

// gamma = 1 / sqrt(1^T G^{-1} 1) and u = gamma B^{-T} 1 = gamma B G^{-1} 1.
EqualAngle equal_angle_vector(const Mat& d, const IndexList& idx) {
    const Mat b = d.select_columns(idx);
    if (b.rows() != b.cols()) {
        throw Error(ErrorCode::DimensionError, "basis must have exactly n columns");
    }
    const Mat g_inv = invert(gram(b));
    const double gs = grand_sum(g_inv);
    if (!(gs > 0.0)) throw Error(ErrorCode::Singular, "grand sum of G^{-1} is not positive");
    EqualAngle out;
    out.gamma = 1.0 / std::sqrt(gs);
    const Vec ones(b.cols(), 1.0);
    out.u = b * (g_inv * ones);
    for (double& x : out.u) x *= out.gamma;
    const double len = norm(out.u);
    for (double& x : out.u) x /= len;
    return out;
}

double max_norm_distance(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Collects the tied minimisers into a CmResult. `scores[i]` is the per-basis
// quantity being minimised (p_max or gamma).
CmResult summarize(const Mat& d, const std::vector<IndexList>& bases,
                   const std::vector<double>& scores, const std::vector<Vec>& us) {
    CmResult out;
    out.bases_evaluated = bases.size();
    if (bases.empty()) throw Error(ErrorCode::NotPositiveBasis, "no basis of R^n among the columns");
    out.value = *std::min_element(scores.begin(), scores.end());
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (scores[i] > out.value + kTieTolerance) continue;
        out.argmin_bases.push_back(bases[i]);
        const bool seen = std::any_of(out.cosine_vectors.begin(), out.cosine_vectors.end(),
                                      [&](const Vec& u) {
                                          return max_norm_distance(u, us[i]) <= kCosineVectorDedup;
                                      });
        if (!seen) out.cosine_vectors.push_back(us[i]);
    }
    for (const Vec& u : out.cosine_vectors) out.active_sets.push_back(active_set(d, u, out.value));
    return out;
}

}  // namespace

void for_each_basis(const Mat& d, const std::function<void(const IndexList&)>& visit) {
    const std::size_t n = d.rows();
    for (const IndexList& idx : all_combinations(d.cols(), n)) {
        if (rank(d.select_columns(idx)) == n) visit(idx);
    }
}

std::vector<IndexList> enumerate_bases(const Mat& d) {
    std::vector<IndexList> out;
    for_each_basis(d, [&out](const IndexList& idx) { out.push_back(idx); });
    return out;
}

BasisEvaluation evaluate_basis(const Mat& d, const IndexList& idx) {
    EqualAngle ea = equal_angle_vector(d, idx);
    BasisEvaluation ev;
    ev.column_indices = idx;
    ev.gamma = ea.gamma;
    ev.u = std::move(ea.u);
    ev.p.resize(d.cols());
    for (std::size_t j = 0; j < d.cols(); ++j) ev.p[j] = dot(ev.u, d.col(j));
    ev.p_max = *std::max_element(ev.p.begin(), ev.p.end());
    return ev;
}

CmResult cosine_measure_full(const Mat& d) {
    require_unit_columns(d);
    if (!is_positive_basis(d)) {
        throw Error(ErrorCode::NotPositiveBasis, "input columns do not form a positive basis");
    }
    const std::size_t n = d.rows();
    const std::vector<IndexList> candidates = all_combinations(d.cols(), n);
    std::vector<std::optional<BasisEvaluation>> evals(candidates.size());
    parallel_ranges(candidates.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            if (rank(d.select_columns(candidates[i])) == n) evals[i] = evaluate_basis(d, candidates[i]);
        }
    });

    std::vector<IndexList> bases;
    std::vector<double> scores;
    std::vector<Vec> us;
    for (auto& ev : evals) {
        if (!ev) continue;
        bases.push_back(std::move(ev->column_indices));
        scores.push_back(ev->p_max);
        us.push_back(std::move(ev->u));
    }
    return summarize(d, bases, scores, us);
}

CmResult cosine_measure_structured(const Mat& d, const Partition& part) {
    require_unit_columns(d);
    validate_omega_partition(d, part);

    // Mixed-radix counter over which column each block drops.
    std::size_t total = 1;
    for (const PartitionBlock& b : part.blocks) total *= b.column_indices.size();

    std::vector<IndexList> bases(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        IndexList idx;
        for (const PartitionBlock& b : part.blocks) {
            const std::size_t radix = b.column_indices.size();
            const std::size_t dropped = rest % radix;
            rest /= radix;
            for (std::size_t k = 0; k < radix; ++k)
                if (k != dropped) idx.push_back(b.column_indices[k]);
        }
        std::sort(idx.begin(), idx.end());
        bases[code] = std::move(idx);
    }
    std::sort(bases.begin(), bases.end());

    std::vector<double> scores(total);
    std::vector<Vec> us(total);
    parallel_ranges(total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            EqualAngle ea = equal_angle_vector(d, bases[i]);
            scores[i] = ea.gamma;
            us[i] = std::move(ea.u);
        }
    });
    return summarize(d, bases, scores, us);
}

double cosine_measure_sampled(const Mat& d, std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw Error(ErrorCode::DimensionError, "samples must be positive");
    const Mat unit = normalize_columns(d);
    const std::size_t n = unit.rows();
    const std::size_t s = unit.cols();
    const Mat columns_as_rows = unit.transpose();

    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;

    double best = std::numeric_limits<double>::infinity();
    std::mutex best_mutex;
    parallel_ranges(static_cast<std::size_t>(chunks), [&](std::size_t begin, std::size_t end) {
        double local = std::numeric_limits<double>::infinity();
        Vec g(n);
        for (std::size_t c = begin; c < end; ++c) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const std::uint64_t first = static_cast<std::uint64_t>(c) * kChunk;
            const std::uint64_t count = std::min(kChunk, samples - first);
            for (std::uint64_t k = 0; k < count; ++k) {
                double len2 = 0.0;
                do {
                    len2 = 0.0;
                    for (double& x : g) {
                        x = gauss(rng);
                        len2 += x * x;
                    }
                } while (len2 == 0.0);
                const double inv = 1.0 / std::sqrt(len2);
                double worst = -std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < s; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < n; ++i) acc += columns_as_rows(j, i) * g[i];
                    worst = std::max(worst, acc * inv);
                }
                local = std::min(local, worst);
            }
        }
        std::lock_guard lock(best_mutex);
        best = std::min(best, local);
    });
    return best;
}

IndexList active_set(const Mat& d, std::span<const double> u, double cm_value) {
    if (std::abs(norm(u) - 1.0) > 1e-9) throw Error(ErrorCode::NotUnit, "u must be a unit vector");
    IndexList out;
    for (std::size_t j = 0; j < d.cols(); ++j) {
        if (std::abs(dot(d.col(j), u) - cm_value) <= kActiveTolerance) out.push_back(j);
    }
    return out;
}

GrandSumSplit grand_sum_decomposition_check(const Mat& b2, std::span<const double> b1) {
    if (b1.size() != b2.rows()) throw Error(ErrorCode::DimensionError, "b1 dimension mismatch");
    if (std::abs(norm(b1) - 1.0) > 1e-9) throw Error(ErrorCode::NotUnit, "b1 must be a unit vector");

    Mat b1_col(b1.size(), 1);
    b1_col.set_col(0, b1);
    GrandSumSplit out;
    out.lhs = grand_sum(invert(gram(hstack(b2, b1_col))));

    const Mat g2_inv = invert(gram(b2));
    const Vec v = b2.transpose() * b1;
    const Vec g2_inv_v = g2_inv * v;
    const double schur = 1.0 - dot(v, g2_inv_v);
    if (!(schur > 1e-14)) throw Error(ErrorCode::Singular, "b1 lies in the span of B2");
    const double c = 1.0 / schur;
    double tail = 1.0;
    for (double x : g2_inv_v) tail -= x;
    out.two_block = grand_sum(g2_inv);
    out.rhs = out.two_block + c * tail * tail;
    out.v_norm = norm(v);
    return out;
}

}  // namespace posbasis
