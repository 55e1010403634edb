#include "radclust/cnn/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <zlib.h>

#include "radclust/error.hpp"

namespace radclust::cnn {

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes a uInt length; feed large buffers in chunks.
    constexpr std::size_t kChunk = 1u << 30;
    for (std::size_t pos = 0; pos < bytes.size(); pos += kChunk) {
        const std::size_t len = std::min(kChunk, bytes.size() - pos);
        crc = ::crc32(crc, bytes.data() + pos, static_cast<uInt>(len));
    }
    return static_cast<std::uint32_t>(crc);
}

namespace {

class Writer {
public:
    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f32s(const std::vector<float>& vs) {
        for (float v : vs) {
            f32(v);
        }
    }

    std::vector<std::uint8_t> bytes;
};

class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

    std::size_t pos() const noexcept { return pos_; }

    std::uint8_t u8(const char* what) {
        need(1, what);
        return bytes_[pos_++];
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
        }
        return v;
    }
    void f32s(std::vector<float>& out, const char* what) {
        need(out.size() * 4, what);
        for (float& v : out) {
            v = std::bit_cast<float>(u32(what));
        }
    }

private:
    void need(std::size_t n, const char* what) {
        if (bytes_.size() - pos_ < n) {
            throw ParseError("truncated weight file at byte offset " + std::to_string(bytes_.size()) +
                                 " while reading " + what,
                             bytes_.size());
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_;
};

} // namespace

std::vector<std::uint8_t> save_weights(const WeightSet& ws) {
    Writer w;
    for (char c : std::string("OCNN")) {
        w.u8(static_cast<std::uint8_t>(c));
    }
    w.u8(kWeightFileVersion);
    w.u32(static_cast<std::uint32_t>(ws.convs.size() + ws.denses.size()));
    for (const auto& c : ws.convs) {
        w.u32(4);
        w.u32(static_cast<std::uint32_t>(c.out_channels));
        w.u32(static_cast<std::uint32_t>(c.in_channels));
        w.u32(kKernelSize);
        w.u32(kKernelSize);
    }
    for (const auto& d : ws.denses) {
        w.u32(2);
        w.u32(static_cast<std::uint32_t>(d.out_features));
        w.u32(static_cast<std::uint32_t>(d.in_features));
    }
    const std::size_t payload_start = w.bytes.size();
    for (const auto& c : ws.convs) {
        w.f32s(c.kernel);
        w.f32s(c.bias);
    }
    for (const auto& d : ws.denses) {
        w.f32s(d.weight);
        w.f32s(d.bias);
    }
    const auto payload = std::span<const std::uint8_t>(w.bytes).subspan(payload_start);
    w.u32(crc32(payload));
    return std::move(w.bytes);
}

WeightSet load_weights(std::span<const std::uint8_t> bytes, const CnnSpec& spec) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "OCNN", 4) != 0) {
        throw ParseError("bad magic at byte offset 0 (expected \"OCNN\")", 0);
    }
    Reader r(bytes, 4);
    const std::uint8_t version = r.u8("version");
    if (version != kWeightFileVersion) {
        throw ParseError("weight file version mismatch at byte offset 4: got " +
                             std::to_string(version) + ", expected " +
                             std::to_string(kWeightFileVersion),
                         4);
    }

    WeightSet expected = zero_weights(spec);
    const std::size_t layer_count_offset = r.pos();
    const std::uint32_t layer_count = r.u32("layer count");
    const std::size_t want_layers = expected.convs.size() + expected.denses.size();
    if (layer_count != want_layers) {
        throw ParseError("shape table mismatch at byte offset " + std::to_string(layer_count_offset) +
                             ": " + std::to_string(layer_count) + " layers, topology has " +
                             std::to_string(want_layers),
                         layer_count_offset);
    }

    auto check_dims = [&](const std::string& name, std::vector<std::uint32_t> want) {
        const std::size_t rank_offset = r.pos();
        const std::uint32_t rank = r.u32("shape table");
        if (rank != want.size()) {
            throw ParseError("shape table mismatch at byte offset " + std::to_string(rank_offset) +
                                 ": " + name + " has rank " + std::to_string(rank) +
                                 ", expected " + std::to_string(want.size()),
                             rank_offset);
        }
        for (std::size_t i = 0; i < want.size(); ++i) {
            const std::size_t offset = r.pos();
            const std::uint32_t dim = r.u32("shape table");
            if (dim != want[i]) {
                throw ParseError("shape table mismatch at byte offset " + std::to_string(offset) +
                                     ": " + name + " dim " + std::to_string(i) + " is " +
                                     std::to_string(dim) + ", expected " + std::to_string(want[i]),
                                 offset);
            }
        }
    };

    for (std::size_t i = 0; i < expected.convs.size(); ++i) {
        const auto& c = expected.convs[i];
        check_dims("conv " + std::to_string(i + 1),
                   {static_cast<std::uint32_t>(c.out_channels),
                    static_cast<std::uint32_t>(c.in_channels), kKernelSize, kKernelSize});
    }
    for (std::size_t i = 0; i < expected.denses.size(); ++i) {
        const auto& d = expected.denses[i];
        check_dims("dense " + std::to_string(i + 1),
                   {static_cast<std::uint32_t>(d.out_features),
                    static_cast<std::uint32_t>(d.in_features)});
    }

    const std::size_t payload_start = r.pos();
    WeightSet ws = std::move(expected);
    ws.seed.reset();
    for (auto& c : ws.convs) {
        r.f32s(c.kernel, "conv payload");
        r.f32s(c.bias, "conv payload");
    }
    for (auto& d : ws.denses) {
        r.f32s(d.weight, "dense payload");
        r.f32s(d.bias, "dense payload");
    }
    const std::size_t payload_end = r.pos();
    const std::uint32_t stored_crc = r.u32("checksum");
    const std::uint32_t actual_crc =
        crc32(bytes.subspan(payload_start, payload_end - payload_start));
    if (stored_crc != actual_crc) {
        throw ParseError("weight payload checksum mismatch at byte offset " +
                             std::to_string(payload_end),
                         payload_end);
    }
    try {
        validate(spec, ws);
    } catch (const NumericError& e) {
        throw ParseError(std::string("weight payload: ") + e.what(), payload_start);
    }
    return ws;
}

WeightSet read_weights_file(const std::filesystem::path& path, const CnnSpec& spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open weight file " + path.string());
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    try {
        return load_weights(bytes, spec);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.offset());
    }
}

void write_weights_file(const std::filesystem::path& path, const WeightSet& ws) {
    const auto bytes = save_weights(ws);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write weight file " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("failed writing weight file " + path.string());
    }
}

} // namespace radclust::cnn
