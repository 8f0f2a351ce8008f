#include "cw/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cw/error.hpp"

namespace cw {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw_io("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out.flush()) throw_io("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw_io("failed to move '" + tmp.string() + "' into place: " + ec.message());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || (end != nullptr && *end != '\0'))
        throw_io("cannot parse number '" + text + "' in " + where);
    return v;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open '" + path + "' for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

} // namespace

ResponseMatrix read_responses_csv(const std::string& path) {
    const auto lines = read_lines(path);
    std::size_t first = 0;
    Kind kind = Kind::continuous;
    if (first < lines.size() && lines[first].rfind("#kind=", 0) == 0) {
        const std::string value = lines[first].substr(6);
        if (value == "binary") kind = Kind::binary;
        else if (value == "continuous") kind = Kind::continuous;
        else throw_io("unknown kind '" + value + "' in " + path);
        ++first;
    }
    if (lines.size() < first + 2) throw_io("'" + path + "' has no data rows");

    const auto header = split_csv_line(lines[first]);
    if (header.size() < 2 || header[0] != "question_id")
        throw_io("'" + path + "' must start with a question_id column");

    ResponseMatrix matrix;
    matrix.kind = kind;
    matrix.individual_ids.assign(header.begin() + 1, header.end());
    const std::size_t k = matrix.individual_ids.size();
    const std::size_t n = lines.size() - first - 1;
    matrix.values = Matrix(k, n);
    matrix.question_ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto fields = split_csv_line(lines[first + 1 + i]);
        if (fields.size() != k + 1)
            throw_io("row " + std::to_string(i + 1) + " of '" + path + "' has " +
                     std::to_string(fields.size()) + " fields; expected " + std::to_string(k + 1));
        matrix.question_ids[i] = fields[0];
        for (std::size_t j = 0; j < k; ++j)
            matrix.values(j, i) = parse_double(fields[j + 1], path);
    }
    return matrix;
}

void write_responses_csv(const ResponseMatrix& matrix, const std::string& path) {
    std::string out = "#kind=";
    out += matrix.kind == Kind::binary ? "binary" : "continuous";
    out += "\nquestion_id";
    for (const auto& id : matrix.individual_ids) out += "," + id;
    out += "\n";
    for (std::size_t i = 0; i < matrix.questions(); ++i) {
        out += matrix.question_ids[i];
        for (std::size_t j = 0; j < matrix.individuals(); ++j)
            out += "," + format_double(matrix.values(j, i));
        out += "\n";
    }
    atomic_write_file(path, out);
}

IdColumn read_id_column_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.size() < 2) throw_io("'" + path + "' has no data rows");
    const auto header = split_csv_line(lines[0]);
    if (header.size() != 2) throw_io("'" + path + "' must have exactly two columns");

    IdColumn column;
    column.id_header = header[0];
    column.value_header = header[1];
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 2)
            throw_io("row " + std::to_string(i) + " of '" + path + "' is not two columns");
        column.ids.push_back(fields[0]);
        column.values.push_back(parse_double(fields[1], path));
    }
    return column;
}

void write_id_column_csv(const IdColumn& column, const std::string& path) {
    std::string out = column.id_header + "," + column.value_header + "\n";
    for (std::size_t i = 0; i < column.ids.size(); ++i)
        out += column.ids[i] + "," + format_double(column.values[i]) + "\n";
    atomic_write_file(path, out);
}

void write_scores_csv(const std::vector<std::string>& question_ids, const ScoreVector& scores,
                      const std::string& path) {
    if (question_ids.size() != scores.scores.size())
        throw_validation("write_scores_csv: id/score length mismatch");
    std::string out = "question_id,score,orientation\n";
    for (std::size_t i = 0; i < question_ids.size(); ++i)
        out += question_ids[i] + "," + format_double(scores.scores[i]) + "," +
               orientation_name(scores.orientation) + "\n";
    atomic_write_file(path, out);
}

ScoresFile read_scores_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.size() < 2) throw_io("'" + path + "' has no data rows");
    const auto header = split_csv_line(lines[0]);
    if (header.size() != 3 || header[0] != "question_id" || header[1] != "score")
        throw_io("'" + path + "' is not a scores file (question_id,score,orientation)");

    ScoresFile file;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 3)
            throw_io("row " + std::to_string(i) + " of '" + path + "' is not three columns");
        file.question_ids.push_back(fields[0]);
        file.scores.scores.push_back(parse_double(fields[1], path));
        if (fields[2] == "flipped") file.scores.orientation = Orientation::flipped;
    }
    return file;
}

std::vector<double> align_by_ids(const std::vector<std::string>& question_ids,
                                 const IdColumn& column, const std::string& what) {
    std::unordered_map<std::string, double> lookup;
    for (std::size_t i = 0; i < column.ids.size(); ++i) lookup.emplace(column.ids[i], column.values[i]);
    if (lookup.size() != column.ids.size())
        throw_alignment(what + ": duplicate question ids in file");

    std::vector<std::string> missing, extra;
    std::vector<double> out;
    out.reserve(question_ids.size());
    for (const auto& id : question_ids) {
        const auto it = lookup.find(id);
        if (it == lookup.end()) missing.push_back(id);
        else out.push_back(it->second);
    }
    if (column.ids.size() > question_ids.size() || !missing.empty()) {
        std::unordered_map<std::string, int> wanted;
        for (const auto& id : question_ids) wanted.emplace(id, 1);
        for (const auto& id : column.ids)
            if (wanted.find(id) == wanted.end()) extra.push_back(id);
    }
    if (!missing.empty() || !extra.empty()) {
        std::string msg = what + ": question ids do not align;";
        auto list = [&](const char* label, const std::vector<std::string>& ids) {
            if (ids.empty()) return;
            msg += std::string(" ") + label + " [";
            for (std::size_t i = 0; i < std::min<std::size_t>(ids.size(), 8); ++i)
                msg += (i ? ", " : "") + ids[i];
            if (ids.size() > 8) msg += ", ...";
            msg += "]";
        };
        list("missing", missing);
        list("unexpected", extra);
        throw_alignment(msg);
    }
    return out;
}

} // namespace cw
