#include <array>
#include <charconv>
#include <string>

#include "radclust/error.hpp"
#include "radclust/pipeline/manifest.hpp"

namespace radclust::pipeline {

namespace {

constexpr std::array<std::string_view, 7> kFields{"path", "crop_x", "crop_y", "crop_w", "crop_h", "age", "sex"};

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

[[noreturn]] void fail(std::size_t line, std::string_view field, const std::string& why) {
    throw ParseError("manifest line " + std::to_string(line) + ", field " + std::string(field) + ": " + why,
                     ParseError::npos, line);
}

std::optional<long long> parse_int(std::string_view s, std::size_t line, std::string_view field) {
    if (s.empty()) {
        return std::nullopt;
    }
    long long v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        fail(line, field, "not an integer: '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

std::vector<ManifestEntry> read_manifest(std::string_view text) {
    std::vector<ManifestEntry> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (!header_seen) {
            if (line != kManifestHeader) {
                throw ParseError("manifest line 1: expected header '" + std::string(kManifestHeader) + "'",
                                 ParseError::npos, line_no);
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto cells = split_commas(line);
        if (cells.size() != kFields.size()) {
            throw ParseError("manifest line " + std::to_string(line_no) + ": expected 7 fields, got " +
                                 std::to_string(cells.size()),
                             ParseError::npos, line_no);
        }
        ManifestEntry e;
        if (cells[0].empty()) {
            fail(line_no, "path", "empty path");
        }
        e.path = std::string(cells[0]);

        std::array<std::optional<long long>, 4> crop;
        std::size_t present = 0;
        for (std::size_t c = 0; c < 4; ++c) {
            crop[c] = parse_int(cells[1 + c], line_no, kFields[1 + c]);
            if (crop[c]) {
                if (*crop[c] < 0) {
                    fail(line_no, kFields[1 + c], "negative value");
                }
                ++present;
            }
        }
        if (present == 4) {
            e.crop = imaging::CropRect{static_cast<std::size_t>(*crop[0]), static_cast<std::size_t>(*crop[1]),
                                       static_cast<std::size_t>(*crop[2]), static_cast<std::size_t>(*crop[3])};
        } else if (present != 0) {
            for (std::size_t c = 0; c < 4; ++c) {
                if (!crop[c]) {
                    fail(line_no, kFields[1 + c], "crop fields must be all present or all empty");
                }
            }
        }

        if (const auto age = parse_int(cells[5], line_no, "age")) {
            if (*age < 0 || *age > 130) {
                fail(line_no, "age", "outside [0, 130]: " + std::to_string(*age));
            }
            e.age = static_cast<int>(*age);
        }

        const std::string_view sex = cells[6];
        if (sex == "M") {
            e.sex = Sex::Male;
        } else if (sex == "F") {
            e.sex = Sex::Female;
        } else if (sex.empty() || sex == "unknown") {
            e.sex = Sex::Unknown;
        } else {
            fail(line_no, "sex", "unknown token '" + std::string(sex) + "'");
        }
        entries.push_back(std::move(e));
    }
    if (!header_seen) {
        throw ParseError("manifest is empty; expected header '" + std::string(kManifestHeader) + "'",
                         ParseError::npos, 1);
    }
    return entries;
}

std::string write_manifest(const std::vector<ManifestEntry>& entries) {
    std::string out(kManifestHeader);
    out += '\n';
    for (const auto& e : entries) {
        out += e.path;
        if (e.crop) {
            out += ',' + std::to_string(e.crop->x) + ',' + std::to_string(e.crop->y) + ',' +
                   std::to_string(e.crop->w) + ',' + std::to_string(e.crop->h);
        } else {
            out += ",,,,";
        }
        out += ',';
        if (e.age) {
            out += std::to_string(*e.age);
        }
        out += ',';
        if (e.sex == Sex::Male) {
            out += 'M';
        } else if (e.sex == Sex::Female) {
            out += 'F';
        }
        out += '\n';
    }
    return out;
}

} // namespace radclust::pipeline
