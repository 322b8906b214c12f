#pragma once

#include <cstdint>
#include <vector>

#include "bvpp/errors.hpp"

namespace bvpp {

// Fuzzy c-means over n points in d-dimensional feature space.
struct FcmParams {
    int clusters = 3;
    double fuzzifier = 2.0;  // m > 1
    double tol = 1e-6;       // stop when max centroid movement < tol
    int max_iter = 300;
    std::uint64_t seed = 0;
};

struct FcmResult {
    std::vector<std::vector<double>> centroids;   // c x d
    std::vector<std::vector<double>> membership;  // n x c, rows sum to 1
    double fuzzifier = 2.0;
    std::vector<int> hard_labels;  // argmax per row, ties to the lowest index
    int iterations = 0;
    double objective = 0.0;                 // sum_i sum_k U[i][k]^m * d_ik^2
    std::vector<double> objective_history;  // one entry per iteration
    double max_row_sum_error = 0.0;         // worst |sum_k U[i][k] - 1| seen
};

// Per-dimension z-scores using the population standard deviation; constant
// dimensions are centered only.
struct Standardization {
    std::vector<double> mean;
    std::vector<double> stddev;  // 1.0 where the dimension is constant
};

Standardization fit_standardization(const std::vector<std::vector<double>>& points);
std::vector<std::vector<double>> apply_standardization(
    const std::vector<std::vector<double>>& points, const Standardization& s);

FcmResult fcm_cluster(const std::vector<std::vector<double>>& points, const FcmParams& params);

}  // namespace bvpp
