#pragma once

#include <cstddef>
#include <vector>

#include "nrcdt/measures.hpp"

namespace nrcdt {

/// Row-major grayscale image; row 0 is the top of the picture.
struct Raster {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> pixels;

    Raster() = default;
    Raster(std::size_t h, std::size_t w, double fill = 0.0) : height(h), width(w), pixels(h * w, fill) {}

    [[nodiscard]] double& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
    [[nodiscard]] double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

/// Center of pixel (row, col) in the unit frame [-0.5, 0.5]^2, y pointing up.
[[nodiscard]] Point2 pixel_center(std::size_t row, std::size_t col, std::size_t height, std::size_t width) noexcept;

/// One atom per pixel with positive intensity, weight proportional to intensity.
/// Throws ZeroMass for an all-black image and NonFinite / OutOfRange on bad pixels.
[[nodiscard]] DiscreteMeasure2D measure_from_raster(const Raster& image);

/// Accumulates atom mass into the pixel containing it; atoms outside the
/// unit frame are dropped. Inverse of measure_from_raster up to normalization.
[[nodiscard]] Raster rasterize(const DiscreteMeasure2D& m, std::size_t height, std::size_t width);

}  // namespace nrcdt
