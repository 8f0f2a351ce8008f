// crowdwise CLI: simulate / aggregate / evaluate / study / verify.
// Links the shared library through its C API only.

#include <sys/wait.h>
#include <unistd.h>

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crowdwise.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 4;

class CliError : public std::runtime_error {
public:
    CliError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

[[noreturn]] void fail_status(cw_status status) {
    throw CliError(status == CW_OK ? kExitFailure : static_cast<int>(status), cw_last_error());
}

void check(cw_status status) {
    if (status != CW_OK) fail_status(status);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CliError(kExitIo, "cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out.flush()) throw CliError(kExitIo, "failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw CliError(kExitIo, "failed to move '" + tmp.string() + "' into place");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(kExitIo, "cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a64_digest(const fs::path& path) {
    const std::string bytes = read_file(path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, hash);
    return buf;
}

// ------------------------------------------------------------------
// RAII wrappers over the C API handles used by the CLI.
// ------------------------------------------------------------------

template <typename T, void (*Free)(T*)>
class Handle {
public:
    Handle() = default;
    ~Handle() { reset(); }
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;

    T** out() {
        reset();
        return &ptr_;
    }
    T* get() const { return ptr_; }
    void reset() {
        if (ptr_ != nullptr) Free(ptr_);
        ptr_ = nullptr;
    }

private:
    T* ptr_ = nullptr;
};

using MatrixHandle = Handle<cw_matrix, cw_matrix_free>;
using ScoresHandle = Handle<cw_scores, cw_scores_free>;
using DatasetHandle = Handle<cw_dataset, cw_dataset_free>;
using TableHandle = Handle<cw_table, cw_table_free>;
using CurveHandle = Handle<cw_curve, cw_curve_free>;
using StringsHandle = Handle<cw_strings, cw_strings_free>;

void print_warnings(const StringsHandle& warnings) {
    for (size_t i = 0; i < cw_strings_size(warnings.get()); ++i)
        std::cerr << "warning: " << cw_strings_get(warnings.get(), i) << "\n";
}

// ------------------------------------------------------------------
// Run manifests
// ------------------------------------------------------------------

struct Manifest {
    std::string command;
    std::vector<std::string> argv; // re-execution args, without the --out pair
    std::string out_kind;          // "dir" or "file"
    std::uint64_t seed = 0;
    std::map<std::string, std::string> parameters;
    std::map<std::string, std::string> input_digests; // absolute path -> digest
    std::vector<std::string> outputs;                 // names relative to the out location
};

fs::path manifest_path_for(const fs::path& out, bool is_dir) {
    if (is_dir) return out / "manifest.json";
    fs::path p = out;
    p += ".manifest.json";
    return p;
}

void write_manifest(const Manifest& manifest, const fs::path& out) {
    json doc;
    doc["artifact_version"] = cw_version();
    doc["command"] = manifest.command;
    doc["argv"] = manifest.argv;
    doc["out_kind"] = manifest.out_kind;
    doc["seed"] = manifest.seed;
    doc["parameters"] = manifest.parameters;
    doc["input_digests"] = manifest.input_digests;
    json outs = json::object();
    const bool is_dir = manifest.out_kind == "dir";
    for (const std::string& name : manifest.outputs) {
        const fs::path file = is_dir ? out / name : out;
        outs[name] = fnv1a64_digest(file);
    }
    doc["outputs"] = outs;
    atomic_write(manifest_path_for(out, is_dir), doc.dump(2) + "\n");
}

std::string digest_input(Manifest& manifest, const std::string& path) {
    const fs::path abs = fs::absolute(path).lexically_normal();
    manifest.input_digests[abs.string()] = fnv1a64_digest(abs);
    return abs.string();
}

// ------------------------------------------------------------------
// simulate
// ------------------------------------------------------------------

struct SimFlags {
    std::string preset;
    std::int64_t k = 0;
    std::int64_t n = 0;
    double p_yes = 0.0;
    double beta = 0.0;
    double alpha_bar = 0.0;
    double sigma_alpha = 0.0;
    std::uint64_t seed = 0;
};

void add_sim_options(CLI::App* cmd, SimFlags& flags) {
    cmd->add_option("--preset", flags.preset,
                    "named parameter set (SIM-BASE, SIM-HARD, SIM-ADVERSARIAL, SIM-SMALL, "
                    "SIM-LARGE-K); defaults to SIM-BASE");
    cmd->add_option("--k", flags.k, "number of individuals");
    cmd->add_option("--n", flags.n, "number of questions");
    cmd->add_option("--p-yes", flags.p_yes, "target frequency of the yes class");
    cmd->add_option("--beta", flags.beta, "Beta shape of the class probabilities");
    cmd->add_option("--alpha-bar", flags.alpha_bar, "mean individual skill");
    cmd->add_option("--sigma-alpha", flags.sigma_alpha, "skill spread");
    cmd->add_option("--seed", flags.seed, "random seed")->default_val(0);
}

cw_sim_params resolve_params(const CLI::App* cmd, const SimFlags& flags,
                             std::vector<std::string>& argv) {
    cw_sim_params params{};
    if (!flags.preset.empty()) {
        check(cw_sim_preset(flags.preset.c_str(), &params));
        argv.insert(argv.end(), {"--preset", flags.preset});
    } else {
        check(cw_sim_preset("SIM-BASE", &params));
    }
    auto apply = [&](const char* flag, auto SimFlags::*member, auto cw_sim_params::*target) {
        if (cmd->count(flag) > 0) {
            using Target = std::remove_reference_t<decltype(params.*target)>;
            params.*target = static_cast<Target>(flags.*member);
            std::ostringstream value;
            value << flags.*member;
            argv.insert(argv.end(), {flag, value.str()});
        }
    };
    apply("--k", &SimFlags::k, &cw_sim_params::individuals);
    apply("--n", &SimFlags::n, &cw_sim_params::questions);
    apply("--p-yes", &SimFlags::p_yes, &cw_sim_params::p_yes);
    apply("--beta", &SimFlags::beta, &cw_sim_params::beta);
    apply("--alpha-bar", &SimFlags::alpha_bar, &cw_sim_params::alpha_bar);
    apply("--sigma-alpha", &SimFlags::sigma_alpha, &cw_sim_params::sigma_alpha);
    params.seed = flags.seed;
    argv.insert(argv.end(), {"--seed", std::to_string(flags.seed)});
    return params;
}

void record_params(Manifest& manifest, const cw_sim_params& params) {
    manifest.parameters["k"] = std::to_string(params.individuals);
    manifest.parameters["n"] = std::to_string(params.questions);
    manifest.parameters["p_yes"] = fmt17(params.p_yes);
    manifest.parameters["beta"] = fmt17(params.beta);
    manifest.parameters["alpha_bar"] = fmt17(params.alpha_bar);
    manifest.parameters["sigma_alpha"] = fmt17(params.sigma_alpha);
    manifest.parameters["seed"] = std::to_string(params.seed);
    manifest.seed = params.seed;
}

int run_simulate(const CLI::App* cmd, const SimFlags& flags, const std::string& out_dir) {
    Manifest manifest;
    manifest.command = "simulate";
    manifest.out_kind = "dir";
    manifest.argv.push_back("simulate");
    const cw_sim_params params = resolve_params(cmd, flags, manifest.argv);
    record_params(manifest, params);

    DatasetHandle ds;
    check(cw_simulate(&params, ds.out()));

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    const cw_matrix* raw = cw_dataset_raw_matrix(ds.get());
    check(cw_matrix_write_csv(raw, (dir / "responses.csv").string().c_str()));

    const size_t n = cw_matrix_questions(raw);
    const size_t k = cw_matrix_individuals(raw);
    std::vector<std::int32_t> truth(n);
    std::vector<double> probs(n), alphas(k);
    check(cw_dataset_truth(ds.get(), truth.data()));
    check(cw_dataset_probs(ds.get(), probs.data()));
    check(cw_dataset_alphas(ds.get(), alphas.data()));

    std::string truth_csv = "question_id,label\n";
    std::string probs_csv = "question_id,prob\n";
    for (size_t i = 0; i < n; ++i) {
        const std::string id = cw_matrix_question_id(raw, i);
        truth_csv += id + "," + std::to_string(truth[i]) + "\n";
        probs_csv += id + "," + fmt17(probs[i]) + "\n";
    }
    std::string alphas_csv = "individual_id,alpha\n";
    for (size_t j = 0; j < k; ++j)
        alphas_csv += std::string(cw_matrix_individual_id(raw, j)) + "," + fmt17(alphas[j]) + "\n";

    atomic_write(dir / "truth.csv", truth_csv);
    atomic_write(dir / "probs.csv", probs_csv);
    atomic_write(dir / "alphas.csv", alphas_csv);

    manifest.outputs = {"responses.csv", "truth.csv", "probs.csv", "alphas.csv"};
    write_manifest(manifest, dir);
    std::cout << "simulated " << k << " individuals x " << n << " questions into " << out_dir
              << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------
// aggregate
// ------------------------------------------------------------------

int run_aggregate(const std::string& in_path, const std::string& method, int neighbors,
                  const std::string& out_path) {
    Manifest manifest;
    manifest.command = "aggregate";
    manifest.out_kind = "file";
    const std::string abs_in = digest_input(manifest, in_path);
    manifest.argv = {"aggregate", "--in", abs_in, "--method", method};
    if (neighbors > 0) {
        manifest.argv.insert(manifest.argv.end(), {"--neighbors", std::to_string(neighbors)});
        manifest.parameters["neighbors"] = std::to_string(neighbors);
    }
    manifest.parameters["method"] = method;

    MatrixHandle matrix;
    check(cw_matrix_read_csv(abs_in.c_str(), matrix.out()));

    ScoresHandle scores;
    StringsHandle warnings;
    check(cw_aggregate(matrix.get(), method.c_str(), neighbors, 1, scores.out(), warnings.out()));
    print_warnings(warnings);

    const size_t n = cw_scores_size(scores.get());
    const double* values = cw_scores_values(scores.get());
    const char* orientation =
        cw_scores_orientation(scores.get()) == CW_FLIPPED ? "flipped" : "as_computed";
    std::string csv = "question_id,score,orientation\n";
    for (size_t i = 0; i < n; ++i)
        csv += std::string(cw_matrix_question_id(matrix.get(), i)) + "," + fmt17(values[i]) + "," +
               orientation + "\n";
    atomic_write(out_path, csv);

    manifest.outputs = {fs::path(out_path).filename().string()};
    write_manifest(manifest, out_path);
    std::cout << "wrote " << n << " scores (" << cw_scores_method(scores.get()) << ") to "
              << out_path << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------
// evaluate
// ------------------------------------------------------------------

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

int run_evaluate(const std::string& scores_path, const std::string& truth_path,
                 const std::string& out_path) {
    Manifest manifest;
    manifest.command = "evaluate";
    manifest.out_kind = "file";
    const std::string abs_scores = digest_input(manifest, scores_path);
    const std::string abs_truth = digest_input(manifest, truth_path);
    manifest.argv = {"evaluate", "--scores", abs_scores, "--truth", abs_truth};

    const auto score_rows = read_csv_rows(abs_scores);
    if (score_rows.size() < 2 || score_rows[0].size() < 2 || score_rows[0][0] != "question_id")
        throw CliError(kExitIo, "'" + scores_path + "' is not a scores file");
    const auto truth_rows = read_csv_rows(abs_truth);
    if (truth_rows.size() < 2 || truth_rows[0].size() != 2 || truth_rows[0][0] != "question_id")
        throw CliError(kExitIo, "'" + truth_path + "' is not a truth file");

    auto parse_number = [](const std::string& text, const std::string& where) {
        try {
            size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            throw CliError(kExitIo, "cannot parse number '" + text + "' in " + where);
        }
    };

    std::map<std::string, int> truth_by_id;
    for (size_t i = 1; i < truth_rows.size(); ++i)
        truth_by_id[truth_rows[i][0]] =
            static_cast<int>(parse_number(truth_rows[i][1], truth_path));

    std::vector<double> scores;
    std::vector<std::int32_t> labels;
    std::string method_tag = "scores";
    std::vector<std::string> offending;
    for (size_t i = 1; i < score_rows.size(); ++i) {
        const std::string& id = score_rows[i][0];
        const auto it = truth_by_id.find(id);
        if (it == truth_by_id.end()) {
            offending.push_back(id);
            continue;
        }
        scores.push_back(parse_number(score_rows[i][1], scores_path));
        labels.push_back(it->second);
        truth_by_id.erase(it);
    }
    for (const auto& [id, label] : truth_by_id) offending.push_back(id);
    if (!offending.empty()) {
        std::string msg = "question ids do not align between scores and truth: [";
        for (size_t i = 0; i < std::min<size_t>(offending.size(), 8); ++i)
            msg += (i ? ", " : "") + offending[i];
        if (offending.size() > 8) msg += ", ...";
        throw CliError(CW_ERROR_ALIGNMENT, msg + "]");
    }

    cw_metric_report report{};
    check(cw_evaluate_two_sided(scores.data(), labels.data(), scores.size(), &report));

    // Curve vertices for the selected orientation of each metric.
    std::vector<double> neg(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) neg[i] = -scores[i];
    const double* roc_side = report.auroc_orientation == CW_FLIPPED ? neg.data() : scores.data();
    const double* pr_side = report.aupr_orientation == CW_FLIPPED ? neg.data() : scores.data();

    CurveHandle roc, pr;
    check(cw_roc_curve(roc_side, labels.data(), labels.size(), roc.out()));
    check(cw_pr_curve(pr_side, labels.data(), labels.size(), pr.out()));

    auto curve_json = [](const CurveHandle& handle, const char* xname, const char* yname) {
        const size_t m = cw_curve_size(handle.get());
        const size_t t = cw_curve_threshold_count(handle.get());
        std::vector<double> x(m), y(m), thresholds(t);
        check(cw_curve_values(handle.get(), x.data(), y.data(), thresholds.data()));
        json j;
        j[xname] = x;
        j[yname] = y;
        j["thresholds"] = thresholds;
        return j;
    };

    json doc;
    doc["method_tag"] = method_tag;
    doc["auroc"] = report.auroc;
    doc["aupr"] = report.aupr;
    doc["auroc_orientation"] = report.auroc_orientation == CW_FLIPPED ? "flipped" : "as_computed";
    doc["aupr_orientation"] = report.aupr_orientation == CW_FLIPPED ? "flipped" : "as_computed";
    doc["roc"] = curve_json(roc, "fpr", "tpr");
    doc["pr"] = curve_json(pr, "recall", "precision");
    atomic_write(out_path, doc.dump(2) + "\n");

    manifest.outputs = {fs::path(out_path).filename().string()};
    write_manifest(manifest, out_path);
    std::cout << "auroc " << fmt17(report.auroc) << " aupr " << fmt17(report.aupr) << " -> "
              << out_path << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------
// study
// ------------------------------------------------------------------

struct StudyFlags {
    std::string compare;
    SimFlags sim;
    int replicates = 200;
    std::vector<std::int64_t> ks = {4, 8, 16, 32, 64};
    std::string methods = "pca";
    std::string pca_input = "continuous";
    double fraction = 0.25;
    int repeats = 200;
    std::string crowd_methods = "pca,fa,mean,median";
    std::string classifiers = "ols,logistic,lda,knn(10)";
};

void print_table(const cw_table* table) {
    const size_t rows = cw_table_rows(table);
    const size_t cols = cw_table_cols(table);
    for (size_t c = 0; c < cols; ++c)
        std::cout << (c ? "," : "") << cw_table_column(table, c);
    std::cout << "\n";
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c)
            std::cout << (c ? "," : "") << cw_table_cell(table, r, c);
        std::cout << "\n";
    }
}

int run_study(const CLI::App* cmd, const StudyFlags& flags, const std::string& out_path) {
    Manifest manifest;
    manifest.command = "study";
    manifest.out_kind = "file";
    manifest.argv = {"study", "--compare", flags.compare};
    const cw_sim_params params = resolve_params(cmd, flags.sim, manifest.argv);
    record_params(manifest, params);
    manifest.parameters["compare"] = flags.compare;

    TableHandle table, summary;
    if (flags.compare == "binarization") {
        const bool on_binarized = flags.pca_input == "binarized";
        manifest.argv.insert(manifest.argv.end(),
                             {"--replicates", std::to_string(flags.replicates), "--pca-input",
                              flags.pca_input});
        manifest.parameters["replicates"] = std::to_string(flags.replicates);
        manifest.parameters["pca_input"] = flags.pca_input;
        check(cw_study_binarization(&params, flags.replicates, on_binarized ? 1 : 0, table.out(),
                                    summary.out()));
    } else if (flags.compare == "convergence") {
        std::string ks_csv;
        for (size_t i = 0; i < flags.ks.size(); ++i)
            ks_csv += (i ? "," : "") + std::to_string(flags.ks[i]);
        manifest.argv.insert(manifest.argv.end(),
                             {"--replicates", std::to_string(flags.replicates), "--ks", ks_csv,
                              "--methods", flags.methods});
        manifest.parameters["replicates"] = std::to_string(flags.replicates);
        manifest.parameters["ks"] = ks_csv;
        manifest.parameters["methods"] = flags.methods;
        check(cw_study_convergence(&params, flags.ks.data(), flags.ks.size(), flags.replicates,
                                   flags.methods.c_str(), table.out()));
    } else if (flags.compare == "cv") {
        manifest.argv.insert(manifest.argv.end(),
                             {"--fraction", fmt17(flags.fraction), "--repeats",
                              std::to_string(flags.repeats), "--crowd-methods",
                              flags.crowd_methods, "--classifiers", flags.classifiers});
        manifest.parameters["fraction"] = fmt17(flags.fraction);
        manifest.parameters["repeats"] = std::to_string(flags.repeats);
        manifest.parameters["crowd_methods"] = flags.crowd_methods;
        manifest.parameters["classifiers"] = flags.classifiers;
        check(cw_study_cv(&params, flags.fraction, flags.repeats, flags.crowd_methods.c_str(),
                          flags.classifiers.c_str(), table.out(), summary.out()));
    } else {
        throw CliError(kExitValidation,
                       "--compare must be one of binarization, convergence, cv");
    }

    check(cw_table_write_csv(table.get(), out_path.c_str()));
    manifest.outputs = {fs::path(out_path).filename().string()};
    write_manifest(manifest, out_path);

    std::cout << "study table (" << cw_table_rows(table.get()) << " rows) -> " << out_path << "\n";
    if (summary.get() != nullptr) {
        std::cout << "summary:\n";
        print_table(summary.get());
    }
    return kExitOk;
}

// ------------------------------------------------------------------
// verify
// ------------------------------------------------------------------

int run_self(const std::vector<std::string>& args) {
    std::vector<char*> argv;
    std::string self = fs::read_symlink("/proc/self/exe").string();
    argv.push_back(self.data());
    std::vector<std::string> copy = args;
    for (auto& a : copy) argv.push_back(a.data());
    argv.push_back(nullptr);

    const pid_t pid = fork();
    if (pid < 0) throw CliError(kExitFailure, "fork failed");
    if (pid == 0) {
        execv(self.c_str(), argv.data());
        _exit(127);
    }
    int status = 0;
    waitpid(pid, &status, 0);
    return WIFEXITED(status) ? WEXITSTATUS(status) : kExitFailure;
}

int run_verify(const std::string& manifest_path) {
    const fs::path mpath = fs::absolute(manifest_path);
    json doc;
    try {
        doc = json::parse(read_file(mpath));
    } catch (const json::exception& e) {
        throw CliError(kExitIo, std::string("cannot parse manifest: ") + e.what());
    }

    const std::string out_kind = doc.at("out_kind");
    const bool is_dir = out_kind == "dir";
    const fs::path original_out =
        is_dir ? mpath.parent_path()
               : fs::path(mpath.string().substr(0, mpath.string().size() -
                                                       std::strlen(".manifest.json")));

    // Inputs must still match their recorded digests.
    for (const auto& [path, digest] : doc.at("input_digests").items()) {
        const std::string current = fnv1a64_digest(path);
        if (current != digest)
            throw CliError(kExitValidation,
                           "input '" + path + "' changed since the recorded run");
    }

    // Re-execute into a scratch location next to the original.
    const std::vector<std::string> base_argv = doc.at("argv");
    fs::path scratch = mpath.parent_path() / (".verify-" + std::to_string(::getpid()));
    fs::create_directories(scratch);
    struct ScratchGuard {
        fs::path path;
        ~ScratchGuard() {
            std::error_code ec;
            fs::remove_all(path, ec);
        }
    } guard{scratch};

    fs::path rerun_out = is_dir ? scratch : scratch / original_out.filename();
    std::vector<std::string> argv = base_argv;
    argv.insert(argv.end(), {"--out", rerun_out.string()});
    const int rc = run_self(argv);
    if (rc != kExitOk)
        throw CliError(kExitFailure, "re-execution failed with exit code " + std::to_string(rc));

    bool identical = true;
    for (const auto& [name, digest] : doc.at("outputs").items()) {
        const fs::path original_file = is_dir ? original_out / name : original_out;
        const fs::path rerun_file = is_dir ? rerun_out / name : rerun_out;
        const bool same = read_file(original_file) == read_file(rerun_file);
        std::cout << (same ? "identical " : "DIFFERS   ") << name << "\n";
        identical = identical && same;
    }
    if (!identical) throw CliError(kExitFailure, "re-execution produced different bytes");
    std::cout << "verified: all outputs bit-identical\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowdwise: consensus scores from one-dimensional dimension reduction"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cw_version());

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "generate a simulated dataset bundle");
    SimFlags sim_flags;
    add_sim_options(sim_cmd, sim_flags);
    std::string sim_out;
    sim_cmd->add_option("--out", sim_out, "output directory")->required();

    // aggregate
    auto* agg_cmd = app.add_subcommand("aggregate", "compute consensus scores for a response file");
    std::string agg_in, agg_method, agg_out;
    int agg_neighbors = 0;
    agg_cmd->add_option("--in", agg_in, "responses.csv input")->required();
    agg_cmd->add_option("--method", agg_method,
                        "mean|median|pca|fa|mds|isomap|lle|spectral|sml")
        ->required();
    agg_cmd->add_option("--neighbors", agg_neighbors, "neighbor count for isomap/lle/spectral");
    agg_cmd->add_option("--out", agg_out, "scores.csv output")->required();

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "evaluate scores against ground truth");
    std::string eval_scores, eval_truth, eval_out;
    eval_cmd->add_option("--scores", eval_scores, "scores.csv input")->required();
    eval_cmd->add_option("--truth", eval_truth, "truth.csv input")->required();
    eval_cmd->add_option("--out", eval_out, "report.json output")->required();

    // study
    auto* study_cmd = app.add_subcommand("study", "run a replicated simulation study");
    StudyFlags study_flags;
    study_cmd->add_option("--compare", study_flags.compare, "binarization|convergence|cv")
        ->required();
    add_sim_options(study_cmd, study_flags.sim);
    study_cmd->add_option("--replicates", study_flags.replicates,
                          "replicates (binarization/convergence)");
    study_cmd->add_option("--ks", study_flags.ks, "individual counts for the convergence sweep")
        ->delimiter(',');
    study_cmd->add_option("--methods", study_flags.methods,
                          "methods for the convergence sweep, e.g. pca,mean,isomap(10)");
    study_cmd->add_option("--pca-input", study_flags.pca_input,
                          "binarization study: continuous|binarized PCA input");
    study_cmd->add_option("--fraction", study_flags.fraction, "cv study: training fraction");
    study_cmd->add_option("--repeats", study_flags.repeats, "cv study: split repeats");
    study_cmd->add_option("--crowd-methods", study_flags.crowd_methods, "cv study: crowd methods");
    study_cmd->add_option("--classifiers", study_flags.classifiers,
                          "cv study: supervised baselines (ols,logistic,lda,knn(10))");
    std::string study_out;
    study_cmd->add_option("--out", study_out, "table.csv output")->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "re-run a manifest and diff the outputs");
    std::string verify_manifest;
    verify_cmd->add_option("--manifest", verify_manifest, "manifest.json to verify")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (sim_cmd->parsed()) return run_simulate(sim_cmd, sim_flags, sim_out);
        if (agg_cmd->parsed()) return run_aggregate(agg_in, agg_method, agg_neighbors, agg_out);
        if (eval_cmd->parsed()) return run_evaluate(eval_scores, eval_truth, eval_out);
        if (study_cmd->parsed()) return run_study(study_cmd, study_flags, study_out);
        if (verify_cmd->parsed()) return run_verify(verify_manifest);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitValidation;
}
