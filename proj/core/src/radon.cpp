#include "nrcdt/radon.hpp"

#include <cmath>
#include <numbers>

#include "nrcdt/error.hpp"

namespace nrcdt {

AffineMap::AffineMap(double a11, double a12, double a21, double a22, double y1, double y2)
    : a11_(a11), a12_(a12), a21_(a21), a22_(a22), y1_(y1), y2_(y2) {
    for (double v : {a11, a12, a21, a22, y1, y2}) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "affine map entry is not finite");
    }
    if (!(std::abs(det()) > 1e-12)) {
        throw Error(ErrorKind::SingularMatrix, "affine matrix is singular (|det| <= 1e-12)");
    }
}

AffineMap AffineMap::rotation(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c, -s, s, c};
}

AffineMap AffineMap::reflection(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c, s, s, -c};
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
    return {a11_ * inner.a11_ + a12_ * inner.a21_,
            a11_ * inner.a12_ + a12_ * inner.a22_,
            a21_ * inner.a11_ + a22_ * inner.a21_,
            a21_ * inner.a12_ + a22_ * inner.a22_,
            a11_ * inner.y1_ + a12_ * inner.y2_ + y1_,
            a21_ * inner.y1_ + a22_ * inner.y2_ + y2_};
}

AngleGrid::AngleGrid(std::size_t count) {
    if (count == 0) throw Error(ErrorKind::InvalidConfig, "angle grid needs at least one angle");
    angles_.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        angles_[j] = static_cast<double>(j) * std::numbers::pi / static_cast<double>(count);
    }
}

DiscreteMeasure1D slice(const DiscreteMeasure2D& m, const Direction& d) {
    const auto pts = m.points();
    std::vector<double> positions(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) positions[i] = d.dot(pts[i]);
    return DiscreteMeasure1D::from_atoms(positions, m.weights());
}

DiscreteMeasure2D apply_affine(const DiscreteMeasure2D& m, const AffineMap& T) {
    const auto pts = m.points();
    std::vector<Point2> mapped(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) mapped[i] = T(pts[i]);
    return make_measure_2d(std::move(mapped), m.weights());
}

DirectionRemap remap_direction(const AffineMap& T, const Direction& d) {
    // A^T d
    const double vx = T.a11() * d.ux() + T.a21() * d.uy();
    const double vy = T.a12() * d.ux() + T.a22() * d.uy();
    const double scale = std::hypot(vx, vy);
    if (!(scale > 0.0)) throw Error(ErrorKind::SingularMatrix, "A^T d vanished");
    return {Direction::from_vector(vx, vy), scale, T.y1() * d.ux() + T.y2() * d.uy()};
}

std::string_view to_string(TransformKind kind) noexcept {
    switch (kind) {
        case TransformKind::translation: return "translation";
        case TransformKind::rotation: return "rotation";
        case TransformKind::reflection: return "reflection";
        case TransformKind::anisotropic_scaling: return "anisotropic_scaling";
        case TransformKind::vertical_shear: return "vertical_shear";
    }
    return "unknown";
}

namespace {

std::size_t param_count(TransformKind kind) {
    switch (kind) {
        case TransformKind::translation:
        case TransformKind::anisotropic_scaling: return 2;
        default: return 1;
    }
}

void check_params(TransformKind kind, std::span<const double> params) {
    if (params.size() != param_count(kind)) {
        throw Error(ErrorKind::InvalidConfig,
                    std::string(to_string(kind)) + " expects " + std::to_string(param_count(kind)) +
                        " parameter(s)");
    }
    if (kind == TransformKind::anisotropic_scaling && !(params[0] > 0.0 && params[1] > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "anisotropic scaling needs a, b > 0");
    }
}

}  // namespace

AngleRemap table1_remap(TransformKind kind, std::span<const double> params, double theta) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (!(theta > -half_pi && theta < half_pi)) {
        throw Error(ErrorKind::OutOfRange, "closed forms are stated for theta in (-pi/2, pi/2)");
    }
    check_params(kind, params);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    switch (kind) {
        case TransformKind::translation:
            return {theta, 1.0, params[0] * c + params[1] * s};
        case TransformKind::rotation:
            return {theta - params[0], 1.0, 0.0};
        case TransformKind::reflection:
            return {params[0] - theta, 1.0, 0.0};
        case TransformKind::anisotropic_scaling: {
            const double a = params[0];
            const double b = params[1];
            return {std::atan((b / a) * std::tan(theta)), std::sqrt(a * a * c * c + b * b * s * s), 0.0};
        }
        case TransformKind::vertical_shear: {
            const double k = params[0];
            return {std::atan(k + std::tan(theta)), std::sqrt(1.0 + k * k * c * c + k * std::sin(2.0 * theta)),
                    0.0};
        }
    }
    throw Error(ErrorKind::InvalidConfig, "unknown transformation kind");
}

AffineMap table1_affine(TransformKind kind, std::span<const double> params) {
    check_params(kind, params);
    switch (kind) {
        case TransformKind::translation: return AffineMap::translation(params[0], params[1]);
        case TransformKind::rotation: return AffineMap::rotation(params[0]);
        case TransformKind::reflection: return AffineMap::reflection(params[0]);
        case TransformKind::anisotropic_scaling: return AffineMap::scaling(params[0], params[1]);
        case TransformKind::vertical_shear: return AffineMap::shear(params[0]);
    }
    throw Error(ErrorKind::InvalidConfig, "unknown transformation kind");
}

DiscreteMeasure1D antipodal_reflect(const DiscreteMeasure1D& m) {
    const auto pos = m.positions();
    std::vector<double> negated(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) negated[i] = -pos[i];
    return DiscreteMeasure1D::from_atoms(negated, m.weights());
}

}  // namespace nrcdt
