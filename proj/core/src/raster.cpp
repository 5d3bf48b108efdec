#include "nrcdt/raster.hpp"

#include <cmath>

#include "nrcdt/error.hpp"

namespace nrcdt {

Point2 pixel_center(std::size_t row, std::size_t col, std::size_t height, std::size_t width) noexcept {
    // (2j + 1 - W) / (2W) == (j + 0.5) / W - 0.5, written so that mirrored
    // pixels get exactly negated coordinates.
    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);
    const double x = (2.0 * static_cast<double>(col) + 1.0 - w) / (2.0 * w);
    const double y = (h - 2.0 * static_cast<double>(row) - 1.0) / (2.0 * h);
    return {x, y};
}

DiscreteMeasure2D measure_from_raster(const Raster& image) {
    if (image.pixels.size() != image.height * image.width) {
        throw Error(ErrorKind::DimensionMismatch, "raster pixel count does not match its shape");
    }
    std::vector<Point2> points;
    std::vector<double> weights;
    for (std::size_t r = 0; r < image.height; ++r) {
        for (std::size_t c = 0; c < image.width; ++c) {
            const double v = image.at(r, c);
            if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "non-finite pixel", r * image.width + c);
            if (v < 0.0) throw Error(ErrorKind::OutOfRange, "negative pixel", r * image.width + c);
            if (v > 0.0) {
                points.push_back(pixel_center(r, c, image.height, image.width));
                weights.push_back(v);
            }
        }
    }
    if (points.empty()) throw Error(ErrorKind::ZeroMass, "image has no positive pixel");
    return make_measure_2d(std::move(points), weights);
}

Raster rasterize(const DiscreteMeasure2D& m, std::size_t height, std::size_t width) {
    Raster out(height, width);
    const auto pts = m.points();
    const auto w = m.weights();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double col = std::floor((pts[i].x + 0.5) * static_cast<double>(width));
        const double row = std::floor((0.5 - pts[i].y) * static_cast<double>(height));
        if (col < 0.0 || row < 0.0 || col >= static_cast<double>(width) || row >= static_cast<double>(height)) {
            continue;
        }
        out.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col)) += w[i];
    }
    return out;
}

}  // namespace nrcdt
