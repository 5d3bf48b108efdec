#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nrcdt/measures.hpp"

namespace nrcdt {

/// x -> A x + y with A invertible (|det A| > 1e-12).
class AffineMap {
public:
    /// Throws SingularMatrix when |det| <= 1e-12, NonFinite on NaN/inf entries.
    AffineMap(double a11, double a12, double a21, double a22, double y1 = 0.0, double y2 = 0.0);

    static AffineMap identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static AffineMap translation(double y1, double y2) { return {1.0, 0.0, 0.0, 1.0, y1, y2}; }
    static AffineMap rotation(double phi);
    /// Reflection across the line through the origin at angle phi / 2.
    static AffineMap reflection(double phi);
    static AffineMap scaling(double a, double b) { return {a, 0.0, 0.0, b}; }
    /// Shear along x: (x, y) -> (x + c y, y).
    static AffineMap shear(double c) { return {1.0, c, 0.0, 1.0}; }

    [[nodiscard]] double a11() const noexcept { return a11_; }
    [[nodiscard]] double a12() const noexcept { return a12_; }
    [[nodiscard]] double a21() const noexcept { return a21_; }
    [[nodiscard]] double a22() const noexcept { return a22_; }
    [[nodiscard]] double y1() const noexcept { return y1_; }
    [[nodiscard]] double y2() const noexcept { return y2_; }
    [[nodiscard]] double det() const noexcept { return a11_ * a22_ - a12_ * a21_; }

    [[nodiscard]] Point2 operator()(Point2 p) const noexcept {
        return {a11_ * p.x + a12_ * p.y + y1_, a21_ * p.x + a22_ * p.y + y2_};
    }

    /// (this ∘ inner)(x) = this(inner(x)).
    [[nodiscard]] AffineMap compose(const AffineMap& inner) const;

private:
    double a11_, a12_, a21_, a22_, y1_, y2_;
};

/// L equispaced angles j*pi/L, j = 0..L-1.
class AngleGrid {
public:
    explicit AngleGrid(std::size_t count);

    [[nodiscard]] std::size_t count() const noexcept { return angles_.size(); }
    [[nodiscard]] std::span<const double> angles() const noexcept { return angles_; }
    [[nodiscard]] Direction direction(std::size_t j) const { return Direction::from_angle(angles_.at(j)); }

private:
    std::vector<double> angles_;
};

/// Pushforward of m under x -> <x, d>.
[[nodiscard]] DiscreteMeasure1D slice(const DiscreteMeasure2D& m, const Direction& d);

/// Pushforward of m under T; weights are unchanged.
[[nodiscard]] DiscreteMeasure2D apply_affine(const DiscreteMeasure2D& m, const AffineMap& T);

struct DirectionRemap {
    Direction direction;
    double scale;
    double shift;
};

/// For T = (A, y): slice(T#m, d) == (scale * . + shift)# slice(m, direction)
/// with direction = A^T d / |A^T d|, scale = |A^T d| and shift = <y, d>.
[[nodiscard]] DirectionRemap remap_direction(const AffineMap& T, const Direction& d);

enum class TransformKind { translation, rotation, reflection, anisotropic_scaling, vertical_shear };

[[nodiscard]] std::string_view to_string(TransformKind kind) noexcept;

struct AngleRemap {
    double theta;
    double scale;
    double shift;
};

/// Closed-form direction remapping for the common transformation families,
/// valid for theta in (-pi/2, pi/2). Parameters per kind:
///   translation: (y1, y2)     rotation: (phi)     reflection: (phi)
///   anisotropic_scaling: (a, b), a, b > 0        vertical_shear: (c)
/// Throws OutOfRange for theta outside the open half circle and InvalidConfig
/// for a wrong parameter count or nonpositive scaling.
[[nodiscard]] AngleRemap table1_remap(TransformKind kind, std::span<const double> params, double theta);

/// The AffineMap whose remap_direction the closed form above reproduces.
/// The shear closed form corresponds to A = [[1, c], [0, 1]].
[[nodiscard]] AffineMap table1_affine(TransformKind kind, std::span<const double> params);

/// Pushforward under t -> -t, i.e. the slice along the antipodal direction.
[[nodiscard]] DiscreteMeasure1D antipodal_reflect(const DiscreteMeasure1D& m);

}  // namespace nrcdt
