#pragma once

// Independent oracles used by the unit and acceptance suites. These stay
// deliberately naive (O(n^2)/O(n^3) enumeration, power iteration) and never
// share code with the implementation paths they check.

#include <cstdint>
#include <span>
#include <vector>

#include "cw/matrix.hpp"
#include "cw/numerics.hpp"

namespace oracle {

// O(n^3) Floyd-Warshall over an undirected edge list.
cw::Matrix floyd_warshall(std::size_t n, const std::vector<cw::Edge>& edges);

// Tie-corrected Mann-Whitney AUROC from exact integer pair counts.
double mann_whitney_auroc(std::span<const double> scores, std::span<const int> labels);

// Average precision from a full per-threshold recount.
double average_precision(std::span<const double> scores, std::span<const int> labels);

// Leading eigenvector of a symmetric matrix by power iteration with a
// deterministic start; returns a unit vector with the same sign convention as
// the library (largest-magnitude entry positive).
std::vector<double> power_iteration_top(const cw::Matrix& a, int iterations = 20000);

// Pearson correlation.
double pearson(std::span<const double> a, std::span<const double> b);

} // namespace oracle
