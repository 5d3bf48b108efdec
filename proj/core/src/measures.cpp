#include "nrcdt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nrcdt/error.hpp"

namespace nrcdt {

DiscreteMeasure2D make_measure_2d(std::vector<Point2> points, std::span<const double> raw_weights) {
    if (points.size() != raw_weights.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "measure has " + std::to_string(points.size()) + " points but " +
                        std::to_string(raw_weights.size()) + " weights");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double w = raw_weights[i];
        if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y) || !std::isfinite(w)) {
            throw Error(ErrorKind::NonFinite, "non-finite atom", i);
        }
        if (w < 0.0) {
            throw Error(ErrorKind::OutOfRange, "negative weight", i);
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw Error(ErrorKind::ZeroMass, "all weights are zero");
    }
    std::vector<double> weights(raw_weights.begin(), raw_weights.end());
    // Already-normalized input is kept bit for bit so stored measures round trip.
    if (std::abs(total - 1.0) > 1e-12) {
        for (double& w : weights) w /= total;
    }
    return DiscreteMeasure2D(std::move(points), std::move(weights));
}

DiscreteMeasure1D DiscreteMeasure1D::from_atoms(std::span<const double> positions,
                                                std::span<const double> weights) {
    if (positions.size() != weights.size()) {
        throw Error(ErrorKind::DimensionMismatch, "positions and weights differ in length");
    }
    std::vector<std::size_t> order;
    order.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!std::isfinite(positions[i]) || !std::isfinite(weights[i])) {
            throw Error(ErrorKind::NonFinite, "non-finite atom", i);
        }
        if (weights[i] < 0.0) throw Error(ErrorKind::OutOfRange, "negative weight", i);
        if (weights[i] > 0.0) order.push_back(i);
    }
    if (order.empty()) throw Error(ErrorKind::ZeroMass, "all weights are zero");

    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return positions[a] < positions[b] || (positions[a] == positions[b] && a < b);
    });

    DiscreteMeasure1D m;
    m.positions_.reserve(order.size());
    m.weights_.reserve(order.size());
    for (std::size_t idx : order) {
        // Chains of near-coincident atoms collapse onto the leftmost one.
        if (!m.positions_.empty() && positions[idx] - m.positions_.back() <= kAtomMergeTolerance) {
            m.weights_.back() += weights[idx];
        } else {
            m.positions_.push_back(positions[idx]);
            m.weights_.push_back(weights[idx]);
        }
    }
    const double total = std::accumulate(m.weights_.begin(), m.weights_.end(), 0.0);
    m.cumulative_.resize(m.weights_.size());
    double running = 0.0;
    for (std::size_t i = 0; i < m.weights_.size(); ++i) {
        m.weights_[i] /= total;
        running += m.weights_[i];
        m.cumulative_[i] = running;
    }
    m.cumulative_.back() = 1.0;
    return m;
}

Direction Direction::from_angle(double theta) {
    return Direction(theta, std::cos(theta), std::sin(theta));
}

Direction Direction::from_vector(double x, double y) {
    const double norm = std::hypot(x, y);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorKind::OutOfRange, "direction vector must be finite and nonzero");
    }
    return Direction(std::atan2(y, x), x / norm, y / norm);
}

double cdf(const DiscreteMeasure1D& m, double t) noexcept {
    const auto pos = m.positions();
    const auto it = std::upper_bound(pos.begin(), pos.end(), t);
    if (it == pos.begin()) return 0.0;
    return m.cumulative()[static_cast<std::size_t>(it - pos.begin()) - 1];
}

double quantile(const DiscreteMeasure1D& m, double p) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw Error(ErrorKind::OutOfRange, "quantile level must lie in [0, 1)");
    }
    const auto cum = m.cumulative();
    const double threshold = p + kQuantileTieTolerance;
    const auto it = std::upper_bound(cum.begin(), cum.end(), threshold);
    const std::size_t idx =
        it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
    return m.positions()[idx];
}

Point2 mean_vector(const DiscreteMeasure2D& m) noexcept {
    Point2 mean;
    const auto pts = m.points();
    const auto w = m.weights();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        mean.x += w[i] * pts[i].x;
        mean.y += w[i] * pts[i].y;
    }
    return mean;
}

std::pair<double, double> second_moment_spectrum(const DiscreteMeasure2D& m) noexcept {
    const Point2 mean = mean_vector(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    const auto pts = m.points();
    const auto w = m.weights();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dx = pts[i].x - mean.x;
        const double dy = pts[i].y - mean.y;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * dy;
        syy += w[i] * dy * dy;
    }
    const double half_trace = 0.5 * (sxx + syy);
    const double radius = std::hypot(0.5 * (sxx - syy), sxy);
    const double largest = half_trace + radius;
    // det / largest avoids cancellation in half_trace - radius.
    const double det = sxx * syy - sxy * sxy;
    const double smallest = largest > 0.0 ? std::max(0.0, det / largest) : 0.0;
    return {smallest, largest};
}

bool is_non_collinear(const DiscreteMeasure2D& m, double tol) noexcept {
    const auto [smallest, largest] = second_moment_spectrum(m);
    return largest > 0.0 && smallest > tol * largest;
}

double diameter(const DiscreteMeasure2D& m) noexcept {
    const auto pts = m.points();
    const auto w = m.weights();
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (w[i] <= 0.0) continue;
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (w[j] <= 0.0) continue;
            best = std::max(best, std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
        }
    }
    return best;
}

}  // namespace nrcdt
