#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "minkgeo/errors.hpp"
#include "minkgeo/norm.hpp"
#include "minkgeo/sphere_param.hpp"
#include "minkgeo/vec2.hpp"

namespace minkgeo {

/// Samples of the natural parameterization on [a, b], with their parameters.
struct SampledArc {
    std::vector<Vec2> points;
    std::vector<double> params;
    Norm2D norm;
};

inline SampledArc sample_arc(const NaturalCurve& curve, double a, double b, std::size_t n) {
    if (!(b > a) || n < 2) throw InvalidParameter("sample_arc needs b > a and n >= 2");
    SampledArc arc{{}, {}, curve.norm()};
    arc.points.reserve(n);
    arc.params.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        arc.params.push_back(s);
        arc.points.push_back(curve.point(s));
    }
    return arc;
}

struct IntrinsicResult {
    double d_eps = 0.0;
    double eps = 0.0;
    bool converged = false;
};

namespace detail {

inline double chain_sum(const SampledArc& arc, std::size_t i, std::size_t j, std::size_t stride) {
    double acc = 0.0;
    std::size_t k = i;
    while (k < j) {
        const std::size_t next = std::min(k + stride, j);
        acc += arc.norm(arc.points[next] - arc.points[k]);
        k = next;
    }
    return acc;
}

} // namespace detail

/// eps-chain distance between samples i and j. On a one-dimensional arc the
/// optimal chain with steps < eps is the monotone chain through consecutive
/// samples (r is non-expanding, so skipping never pays once steps are capped);
/// the returned value is that chain sum. Requires every consecutive chord
/// between i and j to be smaller than eps. The converged flag compares against
/// the stride-2 chain: chain sums grow under refinement, so a gap below 1e-8
/// signals the refinement fixed point.
inline IntrinsicResult intrinsic_distance(const SampledArc& arc, std::size_t i, std::size_t j,
                                          double eps) {
    if (i > j) std::swap(i, j);
    if (j >= arc.points.size()) throw InvalidParameter("arc index out of range");
    for (std::size_t k = i; k < j; ++k) {
        const double chord = arc.norm(arc.points[k + 1] - arc.points[k]);
        if (!(chord < eps))
            throw ResolutionError("consecutive chord " + std::to_string(chord) + " at sample " +
                                  std::to_string(k) + " is not below eps=" + std::to_string(eps));
    }
    IntrinsicResult res;
    res.eps = eps;
    res.d_eps = detail::chain_sum(arc, i, j, 1);
    res.converged = std::fabs(res.d_eps - detail::chain_sum(arc, i, j, 2)) < 1e-8;
    return res;
}

/// Dijkstra over the full eps-graph (every pair with chord < eps is an edge).
/// Validation fallback for small instances; with eps between the largest
/// consecutive chord and twice the smallest one the graph degenerates to the
/// sample path and this must reproduce the monotone chain.
inline double intrinsic_distance_dijkstra(const SampledArc& arc, std::size_t i, std::size_t j,
                                          double eps) {
    const std::size_t n = arc.points.size();
    if (n > 2000) throw InvalidParameter("dijkstra fallback is limited to 2000 samples");
    if (i >= n || j >= n) throw InvalidParameter("arc index out of range");
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[i] = 0.0;
    heap.push({0.0, i});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        if (u == j) break;
        for (std::size_t v = 0; v < n; ++v) {
            if (v == u) continue;
            const double chord = arc.norm(arc.points[v] - arc.points[u]);
            if (!(chord < eps)) continue;
            if (d + chord < dist[v]) {
                dist[v] = d + chord;
                heap.push({dist[v], v});
            }
        }
    }
    return dist[j];
}

/// Residual |d-breve(r(a), r(b)) - |a - b|| at the finest refinement level.
/// Levels double the sample density; the arc must be proper (b - a < 2L).
inline double verify_natural_isometry(const NaturalCurve& curve, double a, double b,
                                      int levels = 6, std::size_t base_samples = 16) {
    if (a == b) return 0.0;
    if (a > b) std::swap(a, b);
    if (!(b - a <= 2.0 * curve.half_length() - 1e-6))
        throw InvalidParameter("arc must be proper: b - a < 2L");
    double d = 0.0;
    for (int lvl = 0; lvl <= levels; ++lvl) {
        const std::size_t n = base_samples << lvl;
        const SampledArc arc = sample_arc(curve, a, b, n + 1);
        double max_chord = 0.0;
        for (std::size_t k = 0; k + 1 < arc.points.size(); ++k)
            max_chord = std::max(max_chord, arc.norm(arc.points[k + 1] - arc.points[k]));
        d = intrinsic_distance(arc, 0, n, 1.5 * max_chord).d_eps;
    }
    return std::fabs(d - (b - a));
}

} // namespace minkgeo
