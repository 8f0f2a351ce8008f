#include "cw/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cw/error.hpp"
#include "cw/numerics.hpp"
#include "cw/preprocess.hpp"

namespace cw {

const std::vector<int> kDefaultNeighborGrid = {5, 7, 10, 15, 25, 40, 60, 90};

const char* method_name(Method m) {
    switch (m) {
        case Method::mean: return "mean";
        case Method::median: return "median";
        case Method::pca: return "pca";
        case Method::factor_analysis: return "fa";
        case Method::mds: return "mds";
        case Method::isomap: return "isomap";
        case Method::lle: return "lle";
        case Method::spectral: return "spectral";
        case Method::sml: return "sml";
    }
    return "unknown";
}

std::optional<Method> method_from_string(const std::string& name) {
    if (name == "mean") return Method::mean;
    if (name == "median") return Method::median;
    if (name == "pca") return Method::pca;
    if (name == "fa" || name == "factor_analysis") return Method::factor_analysis;
    if (name == "mds") return Method::mds;
    if (name == "isomap") return Method::isomap;
    if (name == "lle") return Method::lle;
    if (name == "spectral") return Method::spectral;
    if (name == "sml") return Method::sml;
    return std::nullopt;
}

bool method_needs_neighbors(Method m) {
    return m == Method::isomap || m == Method::lle || m == Method::spectral;
}

std::string AggregatorSpec::tag() const {
    std::string t = method_name(method);
    if (method_needs_neighbors(method) && n_neighbors.has_value())
        t += "(" + std::to_string(*n_neighbors) + ")";
    return t;
}

void validate_spec(const AggregatorSpec& spec, std::size_t questions) {
    if (!method_needs_neighbors(spec.method)) return;
    if (!spec.n_neighbors.has_value())
        throw_validation(std::string(method_name(spec.method)) + " requires a neighbor count");
    const int nn = *spec.n_neighbors;
    const int min_nn = spec.method == Method::lle ? 2 : 1;
    if (nn < min_nn)
        throw_validation(std::string(method_name(spec.method)) + ": n_neighbors must be >= " +
                         std::to_string(min_nn));
    if (static_cast<std::size_t>(nn) >= questions)
        throw_validation(std::string(method_name(spec.method)) + ": n_neighbors (" +
                         std::to_string(nn) + ") must be smaller than the question count (" +
                         std::to_string(questions) + ")");
}

namespace {

// Question points: rows of the n x k question-by-individual matrix.
Matrix question_points(const ResponseMatrix& matrix) {
    return matrix.values.transposed();
}

double squared_distance(const Matrix& points, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t d = 0; d < points.cols(); ++d) {
        const double diff = points(a, d) - points(b, d);
        s += diff * diff;
    }
    return s;
}

// Union-symmetrized k-nearest-neighbor edges over question points, Euclidean
// weights, distance ties broken by index.
std::vector<Edge> knn_edges(const Matrix& points, int n_neighbors) {
    const std::size_t n = points.rows();
    std::vector<std::vector<char>> linked(n, std::vector<char>(n, 0));
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < n; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) cand.emplace_back(squared_distance(points, i, j), j);
        std::sort(cand.begin(), cand.end());
        for (int t = 0; t < n_neighbors; ++t) {
            const std::size_t j = cand[static_cast<std::size_t>(t)].second;
            linked[std::min(i, j)][std::max(i, j)] = 1;
        }
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (linked[i][j]) edges.push_back({i, j, std::sqrt(squared_distance(points, i, j))});
    return edges;
}

void require_connected(std::size_t n, const std::vector<Edge>& edges, const char* op) {
    const auto sizes = component_sizes(n, edges);
    if (sizes.size() <= 1) return;
    std::string msg = std::string(op) + ": neighbor graph is disconnected (component sizes [";
    for (std::size_t c = 0; c < sizes.size(); ++c) msg += (c ? ", " : "") + std::to_string(sizes[c]);
    throw_numeric(msg + "]); increase n_neighbors");
}

ScoreVector make_scores(std::vector<double> values, std::string tag) {
    ScoreVector sv;
    sv.scores = std::move(values);
    sv.method_tag = std::move(tag);
    return sv;
}

} // namespace

ScoreVector mean_scores(const ResponseMatrix& matrix) {
    const std::size_t k = matrix.individuals();
    const std::size_t n = matrix.questions();
    std::vector<double> scores(n, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const auto row = matrix.values.row(j);
        for (std::size_t i = 0; i < n; ++i) scores[i] += row[i];
    }
    for (double& s : scores) s /= static_cast<double>(k);
    return make_scores(std::move(scores), "mean");
}

ScoreVector median_scores(const ResponseMatrix& matrix) {
    const std::size_t k = matrix.individuals();
    const std::size_t n = matrix.questions();
    std::vector<double> scores(n);
    std::vector<double> column(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) column[j] = matrix.values(j, i);
        std::sort(column.begin(), column.end());
        scores[i] = (k % 2 == 1) ? column[k / 2] : 0.5 * (column[k / 2 - 1] + column[k / 2]);
    }
    return make_scores(std::move(scores), "median");
}

ScoreVector pca_scores(const ResponseMatrix& matrix) {
    const std::size_t k = matrix.individuals();
    const std::size_t n = matrix.questions();

    // Gram matrix of the n x k question-by-individual matrix X; its leading
    // eigenvector is the first right-singular direction of X (k << n).
    Matrix gram(k, k);
    double total = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            const auto ra = matrix.values.row(a);
            const auto rb = matrix.values.row(b);
            for (std::size_t i = 0; i < n; ++i) s += ra[i] * rb[i];
            gram(a, b) = gram(b, a) = s;
        }
        total += gram(a, a);
    }
    if (total == 0.0) throw_numeric("pca: matrix is all zero; first component undefined");

    const EigenResult eig = sym_eig_top(gram, 1);
    std::vector<double> scores(n, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const double w = eig.eigenvectors(j, 0);
        const auto row = matrix.values.row(j);
        for (std::size_t i = 0; i < n; ++i) scores[i] += w * row[i];
    }
    return make_scores(std::move(scores), "pca");
}

ScoreVector factor_analysis_scores(const ResponseMatrix& matrix) {
    return factor_analysis_fit(matrix).scores;
}

FactorModel factor_analysis_fit(const ResponseMatrix& matrix) {
    const std::size_t k = matrix.individuals();
    const std::size_t n = matrix.questions();
    if (k < 3) throw_validation("fa: need at least 3 individuals");

    // Column-centered question-by-individual view; S is the k x k sample
    // covariance (population normalization, matching standardize).
    Matrix x = question_points(matrix);
    for (std::size_t j = 0; j < k; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) x(i, j) -= mean;
    }
    Matrix s(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) v += x(i, a) * x(i, b);
            s(a, b) = s(b, a) = v / static_cast<double>(n);
        }

    // Single-factor model S ~ l l^T + Psi, fit by EM with Sherman-Morrison
    // updates. q = Sigma^{-1} l is the posterior weight vector.
    const EigenResult top = sym_eig_top(s, 1);
    const double psi_floor = 1e-10;
    std::vector<double> l(k), psi(k);
    for (std::size_t j = 0; j < k; ++j) {
        l[j] = top.eigenvectors(j, 0) * std::sqrt(std::max(top.eigenvalues[0] * 0.5, 1e-4));
        psi[j] = std::max(s(j, j) - l[j] * l[j], psi_floor);
    }

    std::vector<double> q(k), t(k), sq(k);
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 1000; ++iter) {
        double gamma = 1.0;
        for (std::size_t j = 0; j < k; ++j) gamma += l[j] * l[j] / psi[j];
        for (std::size_t j = 0; j < k; ++j) {
            t[j] = l[j] / psi[j];
            q[j] = t[j] / gamma;
        }
        for (std::size_t a = 0; a < k; ++a) {
            double v = 0.0;
            for (std::size_t b = 0; b < k; ++b) v += s(a, b) * q[b];
            sq[a] = v;
        }
        double qsq = 0.0, ql = 0.0, tst = 0.0, tr_psi_s = 0.0, logdet = std::log(gamma);
        for (std::size_t j = 0; j < k; ++j) {
            qsq += q[j] * sq[j];
            ql += q[j] * l[j];
            tr_psi_s += s(j, j) / psi[j];
            logdet += std::log(psi[j]);
        }
        for (std::size_t a = 0; a < k; ++a) {
            double v = 0.0;
            for (std::size_t b = 0; b < k; ++b) v += s(a, b) * t[b];
            tst += t[a] * v;
        }
        const double trace_term = tr_psi_s - tst / gamma;
        const double ll = -0.5 * static_cast<double>(n) *
                          (static_cast<double>(k) * std::log(2.0 * M_PI) + logdet + trace_term);
        if (ll < prev_ll - 1e-8)
            throw_numeric("fa: EM log-likelihood decreased; model diverged");
        const bool converged = (ll - prev_ll) < 1e-6 && iter > 0;
        prev_ll = ll;

        const double ezz = qsq + 1.0 - ql; // mean posterior second moment
        for (std::size_t j = 0; j < k; ++j) {
            const double lj = sq[j] / ezz;
            psi[j] = std::max(s(j, j) - lj * sq[j], psi_floor);
            l[j] = lj;
        }
        if (converged) break;
    }

    // Regression-method factor scores with the converged parameters.
    double gamma = 1.0;
    for (std::size_t j = 0; j < k; ++j) gamma += l[j] * l[j] / psi[j];
    for (std::size_t j = 0; j < k; ++j) q[j] = l[j] / psi[j] / gamma;
    std::vector<double> scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < k; ++j) v += x(i, j) * q[j];
        scores[i] = v;
    }

    FactorModel model;
    model.loadings = std::move(l);
    model.uniquenesses = std::move(psi);
    model.scores = make_scores(std::move(scores), "fa");
    return model;
}

ScoreVector mds_from_squared_distances(const Matrix& d2, const std::string& tag) {
    const Matrix b = double_center(d2);
    const EigenResult eig = sym_eig_top(b, 1);
    const double lambda = eig.eigenvalues[0];
    if (lambda < 0.0) throw_numeric(tag + ": top eigenvalue is negative; embedding degenerate");
    const double scale = std::sqrt(std::max(lambda, 0.0));
    std::vector<double> scores(d2.rows());
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = eig.eigenvectors(i, 0) * scale;
    return make_scores(std::move(scores), tag);
}

ScoreVector mds_scores(const ResponseMatrix& matrix) {
    const Matrix points = question_points(matrix);
    const std::size_t n = points.rows();
    Matrix d2(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d2(i, j) = d2(j, i) = squared_distance(points, i, j);
    return mds_from_squared_distances(d2, "mds");
}

ScoreVector isomap_scores(const ResponseMatrix& matrix, int n_neighbors) {
    const Matrix points = question_points(matrix);
    const std::size_t n = points.rows();
    const auto edges = knn_edges(points, n_neighbors);
    require_connected(n, edges, "isomap");

    Matrix geo = all_pairs_shortest_paths(n, edges);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) geo(i, j) = geo(i, j) * geo(i, j);
    ScoreVector sv = mds_from_squared_distances(geo, "isomap");
    sv.method_tag = "isomap(" + std::to_string(n_neighbors) + ")";
    return sv;
}

Matrix lle_reconstruction_weights(const ResponseMatrix& matrix, int n_neighbors) {
    const Matrix points = question_points(matrix);
    const std::size_t n = points.rows();
    const std::size_t nn = static_cast<std::size_t>(n_neighbors);
    Matrix w(n, n);

    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < n; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) cand.emplace_back(squared_distance(points, i, j), j);
        std::sort(cand.begin(), cand.end());

        // Local Gram of the centered neighborhood, ridged, solved against 1.
        Matrix c(nn, nn);
        for (std::size_t a = 0; a < nn; ++a) {
            for (std::size_t b = a; b < nn; ++b) {
                double v = 0.0;
                for (std::size_t d = 0; d < points.cols(); ++d)
                    v += (points(i, d) - points(cand[a].second, d)) *
                         (points(i, d) - points(cand[b].second, d));
                c(a, b) = c(b, a) = v;
            }
        }
        double trace = 0.0;
        for (std::size_t a = 0; a < nn; ++a) trace += c(a, a);
        const double ridge = trace > 0.0 ? 1e-3 * trace / static_cast<double>(nn) : 1e-12;
        for (std::size_t a = 0; a < nn; ++a) c(a, a) += ridge;

        const std::vector<double> ones(nn, 1.0);
        std::vector<double> sol = solve_spd(c, ones);
        double sum = std::accumulate(sol.begin(), sol.end(), 0.0);
        for (std::size_t a = 0; a < nn; ++a) w(i, cand[a].second) = sol[a] / sum;
    }
    return w;
}

ScoreVector lle_scores(const ResponseMatrix& matrix, int n_neighbors) {
    const Matrix points = question_points(matrix);
    const std::size_t n = points.rows();
    require_connected(n, knn_edges(points, n_neighbors), "lle");

    const Matrix w = lle_reconstruction_weights(matrix, n_neighbors);

    // M = (I - W)^T (I - W); the embedding is the second-smallest eigenvector.
    Matrix iw(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) iw(i, j) = (i == j ? 1.0 : 0.0) - w(i, j);
    Matrix m(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            double v = 0.0;
            for (std::size_t r = 0; r < n; ++r) v += iw(r, a) * iw(r, b);
            m(a, b) = m(b, a) = v;
        }

    const EigenResult eig = sym_eig_bottom(m, 2);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = eig.eigenvectors(i, 1);
    ScoreVector sv = make_scores(std::move(scores), "lle(" + std::to_string(n_neighbors) + ")");
    return sv;
}

ScoreVector spectral_scores(const ResponseMatrix& matrix, int n_neighbors,
                            std::vector<std::string>* warnings) {
    const Matrix points = question_points(matrix);
    const std::size_t n = points.rows();
    const auto edges = knn_edges(points, n_neighbors);
    require_connected(n, edges, "spectral");

    // Normalized Laplacian of the binary union-kNN adjacency.
    std::vector<double> degree(n, 0.0);
    for (const Edge& e : edges) {
        degree[e.u] += 1.0;
        degree[e.v] += 1.0;
    }
    Matrix lap(n, n);
    for (std::size_t i = 0; i < n; ++i) lap(i, i) = 1.0;
    for (const Edge& e : edges) {
        const double v = -1.0 / std::sqrt(degree[e.u] * degree[e.v]);
        lap(e.u, e.v) = lap(e.v, e.u) = v;
    }

    const EigenResult eig = sym_eig_bottom(lap, std::min<std::size_t>(3, n));
    if (eig.eigenvalues.size() >= 3 &&
        std::fabs(eig.eigenvalues[2] - eig.eigenvalues[1]) < 1e-10 && warnings != nullptr)
        warnings->push_back("spectral: second eigenvalue is degenerate; embedding direction is a "
                            "tie (complete or highly symmetric graph)");

    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = eig.eigenvectors(i, 1) / std::sqrt(degree[i]);
    return make_scores(std::move(scores), "spectral(" + std::to_string(n_neighbors) + ")");
}

std::vector<double> sml_weights(const ResponseMatrix& matrix, std::vector<std::string>* warnings) {
    if (matrix.kind != Kind::binary)
        throw_validation("sml: method accepts binary responses only");
    const std::size_t k = matrix.individuals();
    const std::size_t n = matrix.questions();
    if (n < 2) throw_validation("sml: need at least two questions");

    // Covariance of the +/-1 mapped responses.
    Matrix signed_resp(k, n);
    std::vector<double> mean(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            signed_resp(j, i) = 2.0 * matrix.values(j, i) - 1.0;
            mean[j] += signed_resp(j, i);
        }
        mean[j] /= static_cast<double>(n);
    }
    Matrix cov(k, k);
    std::vector<char> constant(k, 0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                v += (signed_resp(a, i) - mean[a]) * (signed_resp(b, i) - mean[b]);
            cov(a, b) = cov(b, a) = v / static_cast<double>(n - 1);
        }
    for (std::size_t j = 0; j < k; ++j) {
        if (cov(j, j) == 0.0) {
            constant[j] = 1;
            if (warnings != nullptr)
                warnings->push_back("sml: individual '" + matrix.individual_ids[j] +
                                    "' is constant; weight set to 0");
        }
    }

    // Rank-1 fit to the off-diagonal entries: iterate diagonal imputation from
    // the current fit and re-extraction of the leading eigenvector.
    EigenResult eig = sym_eig_top(cov, 1);
    std::vector<double> v(k);
    for (std::size_t j = 0; j < k; ++j) v[j] = eig.eigenvectors(j, 0);
    Matrix work = cov;
    for (int iter = 0; iter < 100; ++iter) {
        for (std::size_t j = 0; j < k; ++j)
            work(j, j) = eig.eigenvalues[0] * v[j] * v[j];
        eig = sym_eig_top(work, 1);
        double delta = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            delta = std::max(delta, std::fabs(eig.eigenvectors(j, 0) - v[j]));
            v[j] = eig.eigenvectors(j, 0);
        }
        if (delta < 1e-10) break;
    }
    for (std::size_t j = 0; j < k; ++j)
        if (constant[j]) v[j] = 0.0;
    return v;
}

ScoreVector sml_scores(const ResponseMatrix& matrix, std::vector<std::string>* warnings) {
    const std::vector<double> v = sml_weights(matrix, warnings);
    const std::size_t k = matrix.individuals();
    const std::size_t n = matrix.questions();
    std::vector<double> scores(n, 0.0);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
            scores[i] += v[j] * (2.0 * matrix.values(j, i) - 1.0);
    return make_scores(std::move(scores), "sml");
}

ScoreVector align_to_majority(ScoreVector scores, const ResponseMatrix& matrix,
                              std::vector<std::string>* warnings) {
    if (scores.scores.size() != matrix.questions())
        throw_validation("align_to_majority: score length does not match question count");
    const ScoreVector majority = mean_scores(matrix);

    const std::size_t n = scores.scores.size();
    double ms = 0.0, mm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ms += scores.scores[i];
        mm += majority.scores[i];
    }
    ms /= static_cast<double>(n);
    mm /= static_cast<double>(n);
    double num = 0.0, ds = 0.0, dm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (scores.scores[i] - ms) * (majority.scores[i] - mm);
        ds += (scores.scores[i] - ms) * (scores.scores[i] - ms);
        dm += (majority.scores[i] - mm) * (majority.scores[i] - mm);
    }
    if (ds == 0.0 || dm == 0.0) {
        if (warnings != nullptr)
            warnings->push_back("align_to_majority: zero-variance input; orientation unchanged");
        return scores;
    }
    if (num < 0.0) {
        for (double& s : scores.scores) s = -s;
        scores.orientation = scores.orientation == Orientation::flipped ? Orientation::as_computed
                                                                        : Orientation::flipped;
    }
    return scores;
}

std::vector<int> threshold_scores(const ScoreVector& scores, std::size_t n_positive) {
    const std::size_t n = scores.scores.size();
    if (n_positive > n) throw_validation("threshold_scores: n_positive exceeds question count");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores.scores[a] != scores.scores[b]) return scores.scores[a] > scores.scores[b];
        return a < b;
    });
    std::vector<int> out(n, 0);
    for (std::size_t t = 0; t < n_positive; ++t) out[order[t]] = 1;
    return out;
}

ScoreVector aggregate(const ResponseMatrix& matrix, const AggregatorSpec& spec,
                      std::vector<std::string>* warnings) {
    validate_spec(spec, matrix.questions());
    ScoreVector sv;
    switch (spec.method) {
        case Method::mean: sv = mean_scores(matrix); break;
        case Method::median: sv = median_scores(matrix); break;
        case Method::pca: sv = pca_scores(matrix); break;
        case Method::factor_analysis: sv = factor_analysis_scores(matrix); break;
        case Method::mds: sv = mds_scores(matrix); break;
        case Method::isomap: sv = isomap_scores(matrix, *spec.n_neighbors); break;
        case Method::lle: sv = lle_scores(matrix, *spec.n_neighbors); break;
        case Method::spectral: sv = spectral_scores(matrix, *spec.n_neighbors, warnings); break;
        case Method::sml: sv = sml_scores(matrix, warnings); break;
    }
    return align_to_majority(std::move(sv), matrix, warnings);
}

std::vector<AggregatorSpec> parse_aggregator_list(const std::string& csv) {
    std::vector<AggregatorSpec> specs;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t end = csv.find(',', start);
        if (end == std::string::npos) end = csv.size();
        std::string token = csv.substr(start, end - start);
        start = end + 1;
        while (!token.empty() && token.front() == ' ') token.erase(token.begin());
        while (!token.empty() && token.back() == ' ') token.pop_back();
        if (token.empty()) continue;

        AggregatorSpec spec;
        const std::size_t paren = token.find('(');
        std::string name = token;
        if (paren != std::string::npos) {
            if (token.back() != ')')
                throw_validation("method '" + token + "' is malformed");
            name = token.substr(0, paren);
            const std::string arg = token.substr(paren + 1, token.size() - paren - 2);
            try {
                spec.n_neighbors = std::stoi(arg);
            } catch (...) {
                throw_validation("method '" + token + "' has a malformed neighbor count");
            }
        }
        const auto method = method_from_string(name);
        if (!method.has_value()) throw_validation("unknown method '" + name + "'");
        spec.method = *method;
        specs.push_back(spec);
    }
    if (specs.empty()) throw_validation("empty method list");
    return specs;
}

ScoreVector aggregate_auto(const ResponseMatrix& raw, const AggregatorSpec& spec,
                           std::vector<std::string>* warnings) {
    if (spec.method == Method::sml) {
        // SML consumes the raw binary matrix; normalization would destroy the
        // 0/1 structure it depends on.
        return aggregate(raw, spec, warnings);
    }
    const ResponseMatrix normalized = normalize_for_aggregation(raw, warnings);
    return aggregate(normalized, spec, warnings);
}

} // namespace cw
