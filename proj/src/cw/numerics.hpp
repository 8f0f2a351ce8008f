#pragma once

#include <cstddef>
#include <vector>

#include "cw/matrix.hpp"

namespace cw {

// Eigenpairs of a symmetric matrix. `eigenvectors` holds one unit-norm column
// per eigenvalue, ordered like `eigenvalues`. Sign convention: the
// largest-magnitude component of each vector (first such index on ties) is
// positive, so repeated runs and downstream orientation handling agree.
struct EigenResult {
    std::vector<double> eigenvalues;
    Matrix eigenvectors; // dim x m
};

// Top m eigenpairs by descending eigenvalue. A must be symmetric within
// 1e-10 relative tolerance.
EigenResult sym_eig_top(const Matrix& a, std::size_t m);

// Smallest m eigenpairs of a (near) PSD matrix, ascending.
EigenResult sym_eig_bottom(const Matrix& a, std::size_t m);

// Solves A x = b for symmetric positive definite A via Cholesky.
std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b);

struct Edge {
    std::size_t u;
    std::size_t v;
    double w;
};

// Exact geodesic distance matrix of an undirected graph: Dijkstra from every
// source over a binary heap. Throws if the graph is disconnected, listing
// component sizes.
Matrix all_pairs_shortest_paths(std::size_t n, const std::vector<Edge>& edges);

// Connected component sizes of an undirected graph, largest first.
std::vector<std::size_t> component_sizes(std::size_t n, const std::vector<Edge>& edges);

// Gram matrix B = -1/2 J D2 J from squared distances, J = I - (1/n) 11^T.
Matrix double_center(const Matrix& d2);

} // namespace cw
