#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>

#include "radclust/error.hpp"
#include "radclust/pipeline/features_io.hpp"

namespace radclust::pipeline {

namespace {

/// Splits text into lines, dropping a trailing '\r' and the empty line after
/// a final newline.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        pos = eol + 1;
    }
    return lines;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

[[noreturn]] void fail(const std::string& what, std::size_t line) {
    throw ParseError(what + " (line " + std::to_string(line) + ")", ParseError::npos, line);
}

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

} // namespace

bool valid_id(std::string_view id) {
    if (id.empty()) {
        return false;
    }
    for (char c : id) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '_' || c == '-';
        if (!ok) {
            return false;
        }
    }
    return true;
}

std::string write_features_csv(const clustering::FeatureMatrix& fm) {
    std::string out = "id";
    for (std::size_t f = 0; f < fm.d(); ++f) {
        out += ",f" + std::to_string(f);
    }
    out += '\n';
    for (std::size_t i = 0; i < fm.n(); ++i) {
        if (!valid_id(fm.ids()[i])) {
            throw ConfigError("id '" + fm.ids()[i] + "' has characters outside [A-Za-z0-9._-]");
        }
        out += fm.ids()[i];
        for (double v : fm.row(i)) {
            out += ',';
            append_double(out, v);
        }
        out += '\n';
    }
    return out;
}

clustering::FeatureMatrix read_features_csv(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        fail("feature CSV is empty", 1);
    }
    const auto header = split_commas(lines[0]);
    if (header.size() < 2 || header[0] != "id") {
        fail("feature CSV header must be id,f0,...", 1);
    }
    const std::size_t d = header.size() - 1;
    for (std::size_t f = 0; f < d; ++f) {
        if (header[f + 1] != "f" + std::to_string(f)) {
            fail("feature CSV header column " + std::to_string(f + 2) + " should be f" + std::to_string(f), 1);
        }
    }

    std::vector<double> values;
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        const std::size_t line_no = ln + 1;
        if (lines[ln].empty()) {
            if (ln + 1 == lines.size()) {
                break;
            }
            fail("empty row", line_no);
        }
        const auto cells = split_commas(lines[ln]);
        if (cells.size() != d + 1) {
            fail("ragged row: expected " + std::to_string(d + 1) + " fields, got " + std::to_string(cells.size()),
                 line_no);
        }
        std::string id(cells[0]);
        if (!valid_id(id)) {
            fail("invalid id '" + id + "'", line_no);
        }
        if (!seen.insert(id).second) {
            fail("duplicate id '" + id + "'", line_no);
        }
        for (std::size_t f = 0; f < d; ++f) {
            const std::string_view cell = cells[f + 1];
            double v = 0.0;
            const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc{} || end != cell.data() + cell.size()) {
                fail("column f" + std::to_string(f) + ": not a number: '" + std::string(cell) + "'", line_no);
            }
            if (!std::isfinite(v)) {
                fail("column f" + std::to_string(f) + ": non-finite value", line_no);
            }
            values.push_back(v);
        }
        ids.push_back(std::move(id));
    }
    if (ids.empty()) {
        fail("feature CSV has no rows", lines.size());
    }
    const std::size_t n = ids.size();
    return clustering::FeatureMatrix(numerics::Matrix(n, d, std::move(values)), std::move(ids));
}

std::string write_labels_csv(std::span<const std::string> ids, std::span<const int> labels) {
    if (ids.size() != labels.size()) {
        throw ShapeError("labels CSV: " + std::to_string(ids.size()) + " ids for " +
                         std::to_string(labels.size()) + " labels");
    }
    std::string out = "id,cluster\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += ids[i] + ',' + std::to_string(labels[i]) + '\n';
    }
    return out;
}

std::vector<LabeledRow> read_labels_csv(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "id,cluster") {
        fail("labels CSV header must be id,cluster", 1);
    }
    std::vector<LabeledRow> rows;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        const std::size_t line_no = ln + 1;
        if (lines[ln].empty() && ln + 1 == lines.size()) {
            break;
        }
        const auto cells = split_commas(lines[ln]);
        if (cells.size() != 2) {
            fail("ragged row: expected 2 fields, got " + std::to_string(cells.size()), line_no);
        }
        int cluster = 0;
        const auto [end, ec] = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), cluster);
        if (cells[1].empty() || ec != std::errc{} || end != cells[1].data() + cells[1].size() || cluster < 0) {
            fail("cluster is not a non-negative integer: '" + std::string(cells[1]) + "'", line_no);
        }
        rows.push_back(LabeledRow{std::string(cells[0]), cluster});
    }
    return rows;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed: " + path.string());
    }
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot create " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

} // namespace radclust::pipeline
