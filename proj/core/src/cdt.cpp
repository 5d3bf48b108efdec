#include "nrcdt/cdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nrcdt/error.hpp"

namespace nrcdt {

QuantileGrid::QuantileGrid(std::size_t count) {
    if (count == 0) throw Error(ErrorKind::InvalidConfig, "quantile grid needs at least one level");
    levels_.resize(count);
    const double m = static_cast<double>(count);
    for (std::size_t k = 0; k < count; ++k) levels_[k] = (static_cast<double>(k) + 0.5) / m;
}

CurveField::CurveField(std::size_t angle_count, std::size_t curve_count, std::size_t length)
    : angle_count_(angle_count), curve_count_(curve_count), length_(length), values_(curve_count * length) {}

CdtCurve cdt(const DiscreteMeasure1D& m, const QuantileGrid& g) {
    CdtCurve out;
    out.values.reserve(g.count());
    for (double t : g.levels()) out.values.push_back(quantile(m, t));
    return out;
}

namespace {

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) {
        throw Error(ErrorKind::DimensionMismatch,
                    "curve lengths differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
    if (a == 0) throw Error(ErrorKind::DimensionMismatch, "empty curves");
}

double mean_square_gap(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

}  // namespace

double wasserstein2(std::span<const double> a, std::span<const double> b) {
    require_same_length(a.size(), b.size());
    return std::sqrt(mean_square_gap(a, b));
}

RcdtField rcdt(const DiscreteMeasure2D& m, const AngleGrid& ag, const QuantileGrid& g, bool include_antipodes) {
    const std::size_t L = ag.count();
    RcdtField field(L, include_antipodes ? 2 * L : L, g.count());
    const auto levels = g.levels();
    for (std::size_t j = 0; j < L; ++j) {
        const DiscreteMeasure1D projection = slice(m, ag.direction(j));
        auto forward = field.curve(j);
        for (std::size_t k = 0; k < levels.size(); ++k) forward[k] = quantile(projection, levels[k]);
        if (include_antipodes) {
            const DiscreteMeasure1D opposite = antipodal_reflect(projection);
            auto backward = field.curve(L + j);
            for (std::size_t k = 0; k < levels.size(); ++k) backward[k] = quantile(opposite, levels[k]);
        }
    }
    return field;
}

double sliced_wasserstein2(const RcdtField& a, const RcdtField& b) {
    if (a.curve_count() != b.curve_count() || a.angle_count() != b.angle_count()) {
        throw Error(ErrorKind::DimensionMismatch, "R-CDT fields have different direction sets");
    }
    require_same_length(a.length(), b.length());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.curve_count(); ++i) acc += mean_square_gap(a.curve(i), b.curve(i));
    return std::sqrt(acc / static_cast<double>(a.curve_count()));
}

CurveMoments curve_moments(std::span<const double> values) noexcept {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return {mean, std::sqrt(var / n)};
}

namespace {

void standardize(std::span<const double> in, std::span<double> out, double eps_std, std::size_t index) {
    const CurveMoments mom = curve_moments(in);
    if (!(mom.std >= eps_std)) {
        throw Error(ErrorKind::DegenerateProjection,
                    "projection " + std::to_string(index) + " has std " + std::to_string(mom.std) +
                        " below eps_std; the support is numerically a line or a point",
                    index);
    }
    for (std::size_t k = 0; k < in.size(); ++k) out[k] = (in[k] - mom.mean) / mom.std;
}

}  // namespace

NrcdtField normalize(const CurveField& field, double eps_std) {
    NrcdtField out(field.angle_count(), field.curve_count(), field.length());
    for (std::size_t i = 0; i < field.curve_count(); ++i) standardize(field.curve(i), out.curve(i), eps_std, i);
    return out;
}

std::vector<double> normalized_curve(const DiscreteMeasure2D& m, const Direction& d, const QuantileGrid& g,
                                     double eps_std) {
    const CdtCurve curve = cdt(slice(m, d), g);
    std::vector<double> out(curve.values.size());
    standardize(curve.values, out, eps_std, 0);
    return out;
}

MnrcdtCurve max_over_directions(const NrcdtField& field) {
    MnrcdtCurve out;
    out.values.assign(field.length(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < field.curve_count(); ++i) {
        const auto c = field.curve(i);
        for (std::size_t k = 0; k < c.size(); ++k) out.values[k] = std::max(out.values[k], c[k]);
    }
    return out;
}

MnrcdtCurve mnrcdt(const DiscreteMeasure2D& m, const AngleGrid& ag, const QuantileGrid& g,
                   const TransformOptions& opts) {
    if (!is_non_collinear(m, opts.collinear_tol)) {
        throw Error(ErrorKind::CollinearSupport, "measure support is contained in a line");
    }
    return max_over_directions(normalize(rcdt(m, ag, g, opts.include_antipodes), opts.eps_std));
}

std::string_view to_string(CurveNorm norm) noexcept {
    return norm == CurveNorm::chebyshev ? "chebyshev" : "euclidean";
}

double curve_distance(std::span<const double> a, std::span<const double> b, CurveNorm norm) {
    require_same_length(a.size(), b.size());
    if (norm == CurveNorm::euclidean) return std::sqrt(mean_square_gap(a, b));
    double best = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, std::abs(a[k] - b[k]));
    return best;
}

}  // namespace nrcdt
