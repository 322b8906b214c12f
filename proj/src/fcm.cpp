#include "bvpp/fcm.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "bvpp/rng.hpp"

namespace bvpp {

Standardization fit_standardization(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw DegenerateInput("fit_standardization: no points");
    const std::size_t d = points[0].size();
    Standardization s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 1.0);
    for (const auto& p : points) {
        if (p.size() != d)
            throw LengthMismatch("fit_standardization: inconsistent point dimensions");
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += p[j];
    }
    for (std::size_t j = 0; j < d; ++j) s.mean[j] /= static_cast<double>(points.size());
    std::vector<double> var(d, 0.0);
    for (const auto& p : points)
        for (std::size_t j = 0; j < d; ++j) {
            const double e = p[j] - s.mean[j];
            var[j] += e * e;
        }
    for (std::size_t j = 0; j < d; ++j) {
        var[j] /= static_cast<double>(points.size());
        if (var[j] > 0.0) s.stddev[j] = std::sqrt(var[j]);
    }
    return s;
}

std::vector<std::vector<double>> apply_standardization(
    const std::vector<std::vector<double>>& points, const Standardization& s) {
    std::vector<std::vector<double>> out = points;
    for (auto& p : out) {
        if (p.size() != s.mean.size())
            throw LengthMismatch("apply_standardization: inconsistent point dimensions");
        for (std::size_t j = 0; j < p.size(); ++j) p[j] = (p[j] - s.mean[j]) / s.stddev[j];
    }
    return out;
}

namespace {

constexpr double kZeroDistSq = 1e-24;  // below this a point sits on a centroid

double dist_sq(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double e = a[j] - b[j];
        s += e * e;
    }
    return s;
}

// Farthest-point sampling: random first centroid, then repeatedly the point
// farthest from every centroid chosen so far (ties to the lowest index).
std::vector<std::vector<double>> init_centroids(const std::vector<std::vector<double>>& points,
                                                int c, std::uint64_t seed) {
    const std::size_t n = points.size();
    CounterRng rng(stream_key(seed, "fcm-init", 0, 0));
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<std::size_t>(c));
    centroids.push_back(points[static_cast<std::size_t>(
        rng.next_int(0, static_cast<int>(n) - 1))]);
    std::vector<double> min_d(n, std::numeric_limits<double>::infinity());
    while (centroids.size() < static_cast<std::size_t>(c)) {
        std::size_t best = 0;
        double best_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = dist_sq(points[i], centroids.back());
            if (d < min_d[i]) min_d[i] = d;
            if (min_d[i] > best_d) {
                best_d = min_d[i];
                best = i;
            }
        }
        if (best_d < kZeroDistSq)
            throw DegenerateInput("fcm_cluster: fewer distinct points than clusters");
        centroids.push_back(points[best]);
    }
    return centroids;
}

}  // namespace

FcmResult fcm_cluster(const std::vector<std::vector<double>>& points, const FcmParams& params) {
    const int c = params.clusters;
    const double m = params.fuzzifier;
    const std::size_t n = points.size();
    if (c < 2) throw DegenerateInput("fcm_cluster: need at least 2 clusters");
    if (static_cast<int>(n) <= c)
        throw DegenerateInput("fcm_cluster: need more points than clusters");
    if (!(m > 1.0)) throw DegenerateInput("fcm_cluster: fuzzifier must exceed 1");
    const std::size_t d = points[0].size();
    for (const auto& p : points)
        if (p.size() != d) throw LengthMismatch("fcm_cluster: inconsistent point dimensions");

    FcmResult res;
    res.fuzzifier = m;
    res.centroids = init_centroids(points, c, params.seed);
    res.membership.assign(n, std::vector<double>(static_cast<std::size_t>(c), 0.0));

    const double exponent = 1.0 / (m - 1.0);
    std::vector<double> dsq(static_cast<std::size_t>(c), 0.0);
    for (int iter = 0; iter < params.max_iter; ++iter) {
        // membership update: U[i][k] = 1 / sum_j (d_ik^2 / d_ij^2)^(1/(m-1))
        for (std::size_t i = 0; i < n; ++i) {
            int coincident = -1;
            for (int k = 0; k < c; ++k) {
                dsq[static_cast<std::size_t>(k)] =
                    dist_sq(points[i], res.centroids[static_cast<std::size_t>(k)]);
                if (coincident < 0 && dsq[static_cast<std::size_t>(k)] < kZeroDistSq)
                    coincident = k;
            }
            auto& row = res.membership[i];
            if (coincident >= 0) {
                for (int k = 0; k < c; ++k) row[static_cast<std::size_t>(k)] = 0.0;
                row[static_cast<std::size_t>(coincident)] = 1.0;
            } else {
                double row_sum = 0.0;
                for (int k = 0; k < c; ++k) {
                    double denom = 0.0;
                    for (int j = 0; j < c; ++j)
                        denom += std::pow(dsq[static_cast<std::size_t>(k)] /
                                              dsq[static_cast<std::size_t>(j)],
                                          exponent);
                    row[static_cast<std::size_t>(k)] = 1.0 / denom;
                    row_sum += row[static_cast<std::size_t>(k)];
                }
                const double err = std::fabs(row_sum - 1.0);
                if (err > res.max_row_sum_error) res.max_row_sum_error = err;
            }
        }

        // centroid update: V_k = sum_i U^m x / sum_i U^m (kept in place when a
        // cluster carries no weight)
        double movement = 0.0;
        for (int k = 0; k < c; ++k) {
            std::vector<double> num(d, 0.0);
            double den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = std::pow(res.membership[i][static_cast<std::size_t>(k)], m);
                den += w;
                for (std::size_t j = 0; j < d; ++j) num[j] += w * points[i][j];
            }
            if (den <= 0.0) continue;
            auto& v = res.centroids[static_cast<std::size_t>(k)];
            double moved = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double nj = num[j] / den;
                const double e = nj - v[j];
                moved += e * e;
                v[j] = nj;
            }
            moved = std::sqrt(moved);
            if (moved > movement) movement = moved;
        }

        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (int k = 0; k < c; ++k)
                objective += std::pow(res.membership[i][static_cast<std::size_t>(k)], m) *
                             dist_sq(points[i], res.centroids[static_cast<std::size_t>(k)]);
        res.objective = objective;
        res.objective_history.push_back(objective);
        res.iterations = iter + 1;
        if (movement < params.tol) break;
    }

    res.hard_labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        for (int k = 1; k < c; ++k)
            if (res.membership[i][static_cast<std::size_t>(k)] >
                res.membership[i][static_cast<std::size_t>(best)])
                best = k;  // strict > keeps the lowest index on ties
        res.hard_labels[i] = best;
    }
    return res;
}

}  // namespace bvpp
