#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace radclust::imaging {

/// 8-bit grayscale image, row-major.
class ImageGray {
public:
    ImageGray() = default;
    /// Throws ShapeError unless width, height >= 1 and pixels.size() == width * height.
    ImageGray(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);
    ImageGray(std::size_t width, std::size_t height, std::uint8_t fill);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::uint8_t at(std::size_t x, std::size_t y) const noexcept { return pixels_[y * width_ + x]; }
    std::uint8_t& at(std::size_t x, std::size_t y) noexcept { return pixels_[y * width_ + x]; }
    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

    bool operator==(const ImageGray&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

struct CropRect {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t w = 0;
    std::size_t h = 0;

    bool operator==(const CropRect&) const = default;
};

/// Normalized intensities in [0, 1], laid out (height, width, channels).
struct PixelTensor {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 1;
    std::vector<double> values;

    double at(std::size_t y, std::size_t x, std::size_t c = 0) const noexcept {
        return values[(y * width + x) * channels + c];
    }
};

/// Sub-image; output pixel (i, j) is input pixel (x + i, y + j).
/// Throws BoundsError when rect leaves the image or is empty.
ImageGray crop(const ImageGray& img, const CropRect& rect);

/// Integer-factor downscales average each source block (round half up);
/// every other size change samples bilinearly at pixel centers.
ImageGray resize(const ImageGray& img, std::size_t out_w, std::size_t out_h);

/// intensity / 255 into an (h, w, 1) tensor.
PixelTensor normalize(const ImageGray& img);

// Binary PGM ("P5", maxval <= 255). Header tokens are whitespace separated
// and may be interleaved with '#' comments; exactly width * height payload
// bytes follow the single whitespace byte after maxval.
ImageGray load_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_pgm(const ImageGray& img);

ImageGray read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const std::filesystem::path& path, const ImageGray& img);

} // namespace radclust::imaging
