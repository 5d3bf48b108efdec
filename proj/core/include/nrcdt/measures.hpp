#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace nrcdt {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Weighted point set in the plane with weights summing to one.
///
/// Instances are only created through make_measure_2d (or the factories
/// built on it), so every live object satisfies: matching lengths, finite
/// coordinates, nonnegative weights, at least one positive weight, total
/// mass 1 within 1e-9.
class DiscreteMeasure2D {
public:
    [[nodiscard]] std::span<const Point2> points() const noexcept { return points_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }

private:
    DiscreteMeasure2D(std::vector<Point2> points, std::vector<double> weights)
        : points_(std::move(points)), weights_(std::move(weights)) {}

    friend DiscreteMeasure2D make_measure_2d(std::vector<Point2>, std::span<const double>);

    std::vector<Point2> points_;
    std::vector<double> weights_;
};

/// Normalizes raw weights by their sum (weights already summing to one
/// within 1e-12 are kept as given).
/// Throws ZeroMass, DimensionMismatch or NonFinite.
DiscreteMeasure2D make_measure_2d(std::vector<Point2> points, std::span<const double> raw_weights);

/// Atoms closer than this are merged when a 1-D measure is canonicalized.
inline constexpr double kAtomMergeTolerance = 1e-12;

/// Cumulative mass must exceed a level by more than this before the quantile
/// moves onto an atom. Absorbs summation-order rounding so that measures
/// equal in exact arithmetic share quantiles at tie levels.
inline constexpr double kQuantileTieTolerance = 1e-12;

/// Canonical measure on the line: strictly increasing positions, strictly
/// positive weights summing to one. Cumulative weights are cached so cdf and
/// quantile are O(log n).
class DiscreteMeasure1D {
public:
    /// Sorts the atoms, merges positions within kAtomMergeTolerance, drops
    /// zero-weight atoms and renormalizes. Throws ZeroMass, DimensionMismatch
    /// or NonFinite.
    static DiscreteMeasure1D from_atoms(std::span<const double> positions,
                                        std::span<const double> weights);

    [[nodiscard]] std::span<const double> positions() const noexcept { return positions_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] std::span<const double> cumulative() const noexcept { return cumulative_; }
    [[nodiscard]] std::size_t size() const noexcept { return positions_.size(); }

private:
    DiscreteMeasure1D() = default;

    std::vector<double> positions_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

/// Unit vector (cos theta, sin theta).
class Direction {
public:
    static Direction from_angle(double theta);
    /// Normalizes (x, y); throws OutOfRange for a zero or non-finite vector.
    static Direction from_vector(double x, double y);

    [[nodiscard]] double theta() const noexcept { return theta_; }
    [[nodiscard]] double ux() const noexcept { return ux_; }
    [[nodiscard]] double uy() const noexcept { return uy_; }
    [[nodiscard]] double dot(Point2 p) const noexcept { return p.x * ux_ + p.y * uy_; }

private:
    Direction(double theta, double ux, double uy) : theta_(theta), ux_(ux), uy_(uy) {}

    double theta_;
    double ux_;
    double uy_;
};

/// F(t) = mass of (-inf, t].
[[nodiscard]] double cdf(const DiscreteMeasure1D& m, double t) noexcept;

/// Generalized inverse inf{s : F(s) > p}; throws OutOfRange unless 0 <= p < 1.
[[nodiscard]] double quantile(const DiscreteMeasure1D& m, double p);

[[nodiscard]] Point2 mean_vector(const DiscreteMeasure2D& m) noexcept;

/// Eigenvalues (ascending) of the weight-centered second-moment matrix.
[[nodiscard]] std::pair<double, double> second_moment_spectrum(const DiscreteMeasure2D& m) noexcept;

/// True iff the support spans the plane: the smaller singular value of the
/// centered second-moment matrix exceeds tol times the larger one.
[[nodiscard]] bool is_non_collinear(const DiscreteMeasure2D& m, double tol = 1e-9) noexcept;

/// Largest distance between two positively weighted atoms.
[[nodiscard]] double diameter(const DiscreteMeasure2D& m) noexcept;

}  // namespace nrcdt
