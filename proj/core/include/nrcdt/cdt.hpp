#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nrcdt/measures.hpp"
#include "nrcdt/radon.hpp"

namespace nrcdt {

/// Midpoint levels t_k = (k + 0.5) / M of the uniform reference measure on [0, 1].
class QuantileGrid {
public:
    explicit QuantileGrid(std::size_t count);

    [[nodiscard]] std::size_t count() const noexcept { return levels_.size(); }
    [[nodiscard]] std::span<const double> levels() const noexcept { return levels_; }

private:
    std::vector<double> levels_;
};

/// Quantile values of one projection at the grid levels (nondecreasing).
struct CdtCurve {
    std::vector<double> values;
};

/// 2L curves of length M stored row-major. Curve j < L belongs to angle
/// j*pi/L, curve L + j to its antipode. When antipodes are disabled the field
/// holds only the first L curves.
class CurveField {
public:
    CurveField(std::size_t angle_count, std::size_t curve_count, std::size_t length);

    [[nodiscard]] std::size_t angle_count() const noexcept { return angle_count_; }
    [[nodiscard]] std::size_t curve_count() const noexcept { return curve_count_; }
    [[nodiscard]] std::size_t length() const noexcept { return length_; }

    [[nodiscard]] std::span<const double> curve(std::size_t i) const {
        return {values_.data() + i * length_, length_};
    }
    [[nodiscard]] std::span<double> curve(std::size_t i) { return {values_.data() + i * length_, length_}; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t angle_count_;
    std::size_t curve_count_;
    std::size_t length_;
    std::vector<double> values_;
};

struct RcdtField : CurveField {
    using CurveField::CurveField;
};

struct NrcdtField : CurveField {
    using CurveField::CurveField;
};

struct MnrcdtCurve {
    std::vector<double> values;
};

struct TransformOptions {
    /// Include the directions j*pi/L + pi. Disabling this restricts the
    /// maximum to the half circle and breaks the exact symmetry results.
    bool include_antipodes = true;
    /// Curves with standard deviation below this are rejected.
    double eps_std = 1e-8;
    /// Relative singular-value threshold of the non-collinearity check.
    double collinear_tol = 1e-9;
};

/// values[k] = quantile(m, t_k).
[[nodiscard]] CdtCurve cdt(const DiscreteMeasure1D& m, const QuantileGrid& g);

/// sqrt((1/M) sum_k (a_k - b_k)^2); throws DimensionMismatch.
[[nodiscard]] double wasserstein2(std::span<const double> a, std::span<const double> b);
[[nodiscard]] inline double wasserstein2(const CdtCurve& a, const CdtCurve& b) {
    return wasserstein2(a.values, b.values);
}

[[nodiscard]] RcdtField rcdt(const DiscreteMeasure2D& m, const AngleGrid& ag, const QuantileGrid& g,
                             bool include_antipodes = true);

/// Root-mean-square of the per-direction wasserstein2 distances.
[[nodiscard]] double sliced_wasserstein2(const RcdtField& a, const RcdtField& b);

/// Midpoint-quadrature mean and standard deviation of a curve.
struct CurveMoments {
    double mean;
    double std;
};
[[nodiscard]] CurveMoments curve_moments(std::span<const double> values) noexcept;

/// Standardizes every curve; throws DegenerateProjection (index = curve) when
/// a curve's std is below eps_std.
[[nodiscard]] NrcdtField normalize(const CurveField& field, double eps_std = 1e-8);

/// Normalized CDT of a single projection, for directions off the grid.
[[nodiscard]] std::vector<double> normalized_curve(const DiscreteMeasure2D& m, const Direction& d,
                                                   const QuantileGrid& g, double eps_std = 1e-8);

/// Pointwise maximum over the normalized curves.
[[nodiscard]] MnrcdtCurve max_over_directions(const NrcdtField& field);

/// The max-normalized R-CDT. Throws CollinearSupport when the support is
/// (numerically) contained in a line and DegenerateProjection when a curve
/// cannot be standardized.
[[nodiscard]] MnrcdtCurve mnrcdt(const DiscreteMeasure2D& m, const AngleGrid& ag, const QuantileGrid& g,
                                 const TransformOptions& opts = {});

enum class CurveNorm { chebyshev, euclidean };

[[nodiscard]] std::string_view to_string(CurveNorm norm) noexcept;

/// chebyshev: max_k |a_k - b_k|; euclidean: sqrt((1/M) sum_k (a_k - b_k)^2).
[[nodiscard]] double curve_distance(std::span<const double> a, std::span<const double> b, CurveNorm norm);
[[nodiscard]] inline double curve_distance(const MnrcdtCurve& a, const MnrcdtCurve& b, CurveNorm norm) {
    return curve_distance(a.values, b.values, norm);
}

}  // namespace nrcdt
