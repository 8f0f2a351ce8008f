#pragma once

#include <vector>

#include "cw/matrix.hpp"
#include "cw/numerics.hpp"
#include "cw/rng.hpp"
#include "cw/types.hpp"

namespace testutil {

inline cw::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                double lo = -1.0, double hi = 1.0) {
    cw::RandomStream rng(seed);
    cw::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * rng.uniform();
    return m;
}

inline cw::ResponseMatrix random_responses(std::size_t k, std::size_t n, std::uint64_t seed) {
    return cw::make_response_matrix(random_matrix(k, n, seed), cw::Kind::continuous);
}

inline cw::Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
    cw::RandomStream rng(seed);
    cw::Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = 2.0 * rng.uniform() - 1.0;
    return m;
}

inline cw::Matrix random_spd(std::size_t n, std::uint64_t seed) {
    const cw::Matrix b = random_matrix(n, n + 2, seed);
    cw::Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < b.cols(); ++c) s += b(i, c) * b(j, c);
            a(i, j) = a(j, i) = s;
        }
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5;
    return a;
}

// Random connected graph on n nodes with dyadic-rational weights (exact
// floating-point sums): a random spanning path plus extra random edges.
inline std::vector<cw::Edge> random_connected_graph(std::size_t n, std::uint64_t seed) {
    cw::RandomStream rng(seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);

    auto weight = [&] {
        return static_cast<double>(1 + rng.uniform_index(256)) / 64.0;
    };
    std::vector<cw::Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({order[i], order[i + 1], weight()});
    const std::size_t extra = n;
    for (std::size_t t = 0; t < extra; ++t) {
        const std::size_t u = rng.uniform_index(n);
        const std::size_t v = rng.uniform_index(n);
        if (u != v) edges.push_back({u, v, weight()});
    }
    return edges;
}

inline std::vector<int> random_labels(std::size_t n, std::uint64_t seed) {
    cw::RandomStream rng(seed);
    std::vector<int> labels(n);
    bool has0 = false, has1 = false;
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = rng.uniform() < 0.5 ? 0 : 1;
        (labels[i] == 1 ? has1 : has0) = true;
    }
    if (!has0) labels[0] = 0;
    if (!has1) labels[n - 1] = 1;
    return labels;
}

// Scores with deliberate ties (quantized uniforms).
inline std::vector<double> tied_scores(std::size_t n, std::uint64_t seed, int levels = 8) {
    cw::RandomStream rng(seed);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i)
        scores[i] = static_cast<double>(rng.uniform_index(static_cast<std::uint64_t>(levels))) /
                    static_cast<double>(levels);
    return scores;
}

} // namespace testutil
