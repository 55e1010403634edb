#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "radclust/error.hpp"
#include "radclust/imaging/image.hpp"

namespace radclust::imaging {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t pos() const noexcept { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                return;
            }
        }
    }

    std::size_t read_number(const char* field) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > (1u << 30)) {
                throw ParseError(std::string("PGM ") + field + " too large", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw ParseError(std::string("PGM header: expected ") + field + " at byte offset " +
                                 std::to_string(start),
                             start);
        }
        return value;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

ImageGray load_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw ParseError("unsupported magic at byte offset 0 (expected binary PGM \"P5\")", 0);
    }
    HeaderReader reader(bytes.subspan(2));
    const std::size_t width = reader.read_number("width");
    const std::size_t height = reader.read_number("height");
    const std::size_t maxval_offset = reader.pos() + 2;
    const std::size_t maxval = reader.read_number("maxval");
    if (maxval == 0 || maxval > 255) {
        throw ParseError("PGM maxval " + std::to_string(maxval) +
                             " unsupported (must be 1..255) at byte offset " +
                             std::to_string(maxval_offset),
                         maxval_offset);
    }
    if (width == 0 || height == 0) {
        throw ParseError("PGM dimensions must be positive", 2);
    }
    std::size_t pos = reader.pos() + 2;
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw ParseError("PGM header must end with one whitespace byte at byte offset " +
                             std::to_string(pos),
                         pos);
    }
    ++pos;
    const std::size_t expected = width * height;
    const std::size_t available = bytes.size() - pos;
    if (available < expected) {
        // Offset of the first byte the header promised but the stream lacks.
        const std::size_t offset = pos + available;
        throw ParseError("truncated PGM payload at byte offset " + std::to_string(offset) +
                             ": expected " + std::to_string(expected) + " bytes, got " +
                             std::to_string(available),
                         offset);
    }
    const auto payload = bytes.subspan(pos, expected);
    return ImageGray(width, height, std::vector<std::uint8_t>(payload.begin(), payload.end()));
}

std::vector<std::uint8_t> save_pgm(const ImageGray& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

ImageGray read_pgm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open image " + path.string());
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    try {
        return load_pgm(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.offset());
    }
}

void write_pgm_file(const std::filesystem::path& path, const ImageGray& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write image " + path.string());
    }
    const auto bytes = save_pgm(img);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("failed writing image " + path.string());
    }
}

} // namespace radclust::imaging
