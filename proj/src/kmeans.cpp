#include "ldes/kmeans.hpp"

#include "ldes/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace ldes {

namespace {

// std::uniform_real_distribution is implementation-defined; this is not.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> seed_centers(std::span<const double> x, int k, std::mt19937_64& rng) {
    const std::size_t n = x.size();
    std::vector<double> centers;
    centers.push_back(x[static_cast<std::size_t>(unit_uniform(rng) * n) % n]);
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double c : centers) best = std::min(best, (x[i] - c) * (x[i] - c));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) break;  // every point already coincides with a center
        double target = unit_uniform(rng) * total;
        std::size_t pick = n - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (d2[i] > 0.0 && acc >= target) {
                pick = i;
                break;
            }
        }
        centers.push_back(x[pick]);
    }
    return centers;
}

KMeansResult lloyd(std::span<const double> x, std::vector<double> centers) {
    const std::size_t n = x.size();
    const std::size_t k = centers.size();
    std::vector<int> labels(n, -1);
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::abs(x[i] - centers[0]);
            for (std::size_t c = 1; c < k; ++c) {
                double d = std::abs(x[i] - centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        std::vector<double> sum(k, 0.0);
        std::vector<int> count(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[labels[i]] += x[i];
            ++count[labels[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] > 0) centers[c] = sum[c] / count[c];
        }
    }
    KMeansResult r;
    r.labels = std::move(labels);
    r.centers = std::move(centers);
    for (std::size_t i = 0; i < n; ++i) {
        double d = x[i] - r.centers[r.labels[i]];
        r.inertia += d * d;
    }
    return r;
}

// Drops empty clusters and renumbers by ascending center.
void canonicalize(KMeansResult& r) {
    const std::size_t k = r.centers.size();
    std::vector<int> count(k, 0);
    for (int l : r.labels) ++count[l];
    std::vector<int> order;
    for (std::size_t c = 0; c < k; ++c) {
        if (count[c] > 0) order.push_back(static_cast<int>(c));
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return r.centers[a] < r.centers[b]; });
    std::vector<int> remap(k, -1);
    std::vector<double> centers;
    for (std::size_t j = 0; j < order.size(); ++j) {
        remap[order[j]] = static_cast<int>(j);
        centers.push_back(r.centers[order[j]]);
    }
    for (int& l : r.labels) l = remap[l];
    r.centers = std::move(centers);
}

}  // namespace

KMeansResult kmeans_1d(std::span<const double> values, int k, std::uint64_t seed, int restarts) {
    if (k < 1) throw ArgumentError("kmeans: k must be >= 1");
    if (restarts < 1) throw ArgumentError("kmeans: restarts must be >= 1");
    if (values.empty()) return {};
    const int kk = std::min<int>(k, static_cast<int>(values.size()));
    std::mt19937_64 rng(seed);
    KMeansResult best;
    bool have = false;
    for (int r = 0; r < restarts; ++r) {
        KMeansResult run = lloyd(values, seed_centers(values, kk, rng));
        if (!have || run.inertia < best.inertia) {
            best = std::move(run);
            have = true;
        }
    }
    canonicalize(best);
    return best;
}

}  // namespace ldes
