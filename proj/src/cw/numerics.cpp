#include "cw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "cw/error.hpp"

namespace cw {

namespace {

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::fabs(a(i, j)));
    return m;
}

void require_symmetric(const Matrix& a, const char* op) {
    if (a.rows() != a.cols()) throw_numeric(std::string(op) + ": matrix is not square");
    const double scale = std::max(max_abs(a), 1e-300);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::fabs(a(i, j) - a(j, i)) > 1e-10 * scale)
                throw_numeric(std::string(op) + ": matrix is not symmetric at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
}

// Cyclic Jacobi sweeps over the upper triangle. Dimensions in this project
// stay small (<= a few hundred), where Jacobi is robust and plenty fast.
void jacobi_eigen(Matrix a, std::vector<double>& eigenvalues, Matrix& vectors) {
    const std::size_t n = a.rows();
    vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) vectors(i, i) = 1.0;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        double diag = 0.0;
        for (std::size_t p = 0; p < n; ++p) diag += a(p, p) * a(p, p);
        if (off <= 1e-30 * std::max(diag, 1e-300) || off == 0.0) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Skip rotations that cannot change anything at double precision.
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                                     : 1.0 / (theta - std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = vectors(r, p);
                    const double vrq = vectors(r, q);
                    vectors(r, p) = c * vrp - s * vrq;
                    vectors(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a(i, i);
}

void fix_sign(Matrix& vectors, std::size_t column) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < vectors.rows(); ++i) {
        const double mag = std::fabs(vectors(i, column));
        if (mag > best) {
            best = mag;
            arg = i;
        }
    }
    if (vectors(arg, column) < 0.0)
        for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, column) = -vectors(i, column);
}

EigenResult select_eigen(const std::vector<double>& values, const Matrix& vectors,
                         std::size_t m, bool descending) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return descending ? values[a] > values[b] : values[a] < values[b];
    });

    EigenResult result;
    result.eigenvalues.resize(m);
    result.eigenvectors = Matrix(n, m);
    for (std::size_t c = 0; c < m; ++c) {
        const std::size_t src = order[c];
        result.eigenvalues[c] = values[src];
        for (std::size_t i = 0; i < n; ++i) result.eigenvectors(i, c) = vectors(i, src);
        fix_sign(result.eigenvectors, c);
    }
    return result;
}

EigenResult sym_eig(const Matrix& a, std::size_t m, bool descending, const char* op) {
    require_symmetric(a, op);
    const std::size_t n = a.rows();
    if (m < 1 || m > n) throw_numeric(std::string(op) + ": requested count out of range");

    // Canonicalize from the upper triangle so tiny asymmetries cannot leak in.
    Matrix sym(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        sym(i, i) = a(i, i);
        for (std::size_t j = i + 1; j < n; ++j) sym(i, j) = sym(j, i) = a(i, j);
    }

    std::vector<double> values;
    Matrix vectors;
    jacobi_eigen(std::move(sym), values, vectors);
    return select_eigen(values, vectors, m, descending);
}

} // namespace

EigenResult sym_eig_top(const Matrix& a, std::size_t m) {
    return sym_eig(a, m, true, "sym_eig_top");
}

EigenResult sym_eig_bottom(const Matrix& a, std::size_t m) {
    return sym_eig(a, m, false, "sym_eig_bottom");
}

std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b) {
    require_symmetric(a, "solve_spd");
    const std::size_t n = a.rows();
    if (b.size() != n) throw_numeric("solve_spd: dimension mismatch");

    // Cholesky A = L L^T.
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t s = 0; s < j; ++s) d -= l(j, s) * l(j, s);
        if (!(d > 0.0))
            throw_numeric("solve_spd: non-positive pivot at index " + std::to_string(j));
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (std::size_t s = 0; s < j; ++s) v -= l(i, s) * l(j, s);
            l(i, j) = v / l(j, j);
        }
    }

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t s = 0; s < i; ++s) v -= l(i, s) * y[s];
        y[i] = v / l(i, i);
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double v = y[ii];
        for (std::size_t s = ii + 1; s < n; ++s) v -= l(s, ii) * x[s];
        x[ii] = v / l(ii, ii);
    }
    return x;
}

namespace {

std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(
    std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) throw_numeric("shortest paths: edge endpoint out of range");
        if (e.w < 0.0) throw_numeric("shortest paths: negative edge weight");
        adj[e.u].emplace_back(e.v, e.w);
        adj[e.v].emplace_back(e.u, e.w);
    }
    return adj;
}

} // namespace

std::vector<std::size_t> component_sizes(std::size_t n, const std::vector<Edge>& edges) {
    const auto adj = adjacency(n, edges);
    std::vector<std::size_t> sizes;
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::size_t size = 0;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            ++size;
            for (const auto& [v, w] : adj[u]) {
                (void)w;
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        sizes.push_back(size);
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

Matrix all_pairs_shortest_paths(std::size_t n, const std::vector<Edge>& edges) {
    const auto adj = adjacency(n, edges);
    const double inf = std::numeric_limits<double>::infinity();
    Matrix dist(n, n, inf);

    using Item = std::pair<double, std::size_t>; // (distance, node)
    for (std::size_t src = 0; src < n; ++src) {
        auto row = dist.row(src);
        row[src] = 0.0;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
        queue.emplace(0.0, src);
        while (!queue.empty()) {
            const auto [d, u] = queue.top();
            queue.pop();
            if (d > row[u]) continue; // stale entry
            for (const auto& [v, w] : adj[u]) {
                const double nd = d + w;
                if (nd < row[v]) {
                    row[v] = nd;
                    queue.emplace(nd, v);
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (row[v] == inf) {
                const auto sizes = component_sizes(n, edges);
                std::string msg = "graph is disconnected; component sizes [";
                for (std::size_t c = 0; c < sizes.size(); ++c)
                    msg += (c ? ", " : "") + std::to_string(sizes[c]);
                throw_numeric(msg + "]");
            }
        }
    }
    return dist;
}

Matrix double_center(const Matrix& d2) {
    if (d2.rows() != d2.cols()) throw_numeric("double_center: matrix is not square");
    require_symmetric(d2, "double_center");
    const std::size_t n = d2.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (d2(i, i) != 0.0) throw_numeric("double_center: nonzero diagonal at " + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j)
            if (d2(i, j) < 0.0)
                throw_numeric("double_center: negative squared distance at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
    }

    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += d2(i, j);
        row_mean[i] = s / static_cast<double>(n);
        grand += s;
    }
    grand /= static_cast<double>(n) * static_cast<double>(n);

    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b(i, j) = -0.5 * (d2(i, j) - row_mean[i] - row_mean[j] + grand);
    return b;
}

} // namespace cw
