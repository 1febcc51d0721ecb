#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ldes {

struct KMeansResult {
    // Cluster index per input value; clusters are numbered by ascending center.
    std::vector<int> labels;
    std::vector<double> centers;
    double inertia = 0.0;
};

// One-dimensional Lloyd k-means with k-means++ seeding. `restarts` seedings
// are drawn from a generator seeded with `seed` and the lowest-inertia run is
// kept, so the result is a pure function of (values, k, seed, restarts).
// Empty clusters are dropped, so fewer than k clusters come back when there
// are fewer than k distinct values.
KMeansResult kmeans_1d(std::span<const double> values, int k, std::uint64_t seed,
                       int restarts = 10);

}  // namespace ldes
