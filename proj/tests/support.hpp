#pragma once

// Generators and independent oracles shared by the unit and acceptance
// suites. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <nrcdt/measures.hpp>
#include <nrcdt/radon.hpp>

namespace nrcdt::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Uniform cloud in [-1, 1]^2 with weights bounded away from zero.
inline DiscreteMeasure2D random_measure(Rng& rng, std::size_t max_atoms, std::size_t min_atoms = 3) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(min_atoms, max_atoms)(rng);
    std::vector<Point2> pts(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
        w[i] = uniform(rng, 0.05, 1.0);
    }
    return make_measure_2d(std::move(pts), w);
}

inline AffineMap random_invertible(Rng& rng) {
    for (;;) {
        const double a11 = uniform(rng, -2, 2), a12 = uniform(rng, -2, 2);
        const double a21 = uniform(rng, -2, 2), a22 = uniform(rng, -2, 2);
        if (std::abs(a11 * a22 - a12 * a21) > 0.1) {
            return {a11, a12, a21, a22, uniform(rng, -3, 3), uniform(rng, -3, 3)};
        }
    }
}

/// Random element of the exact symmetry subgroup of an L-angle grid.
inline AffineMap random_grid_symmetry(Rng& rng, std::size_t L) {
    const double step = std::numbers::pi / static_cast<double>(L);
    const auto turns = std::uniform_int_distribution<std::size_t>(0, 2 * L - 1)(rng);
    AffineMap linear = AffineMap::rotation(static_cast<double>(turns) * step);
    if (std::bernoulli_distribution(0.5)(rng)) {
        const auto j = std::uniform_int_distribution<std::size_t>(0, L - 1)(rng);
        linear = linear.compose(AffineMap::reflection(2.0 * static_cast<double>(j) * step));
    }
    const double c = uniform(rng, 0.5, 2.0);
    linear = linear.compose(AffineMap::scaling(c, c));
    return AffineMap::translation(uniform(rng, -3, 3), uniform(rng, -3, 3)).compose(linear);
}

struct Atom {
    double position;
    double weight;
};

/// inf{s : F(s) > p} by scanning every atom and summing by brute force.
inline double brute_force_quantile(const std::vector<Atom>& atoms, double p) {
    double best = std::numeric_limits<double>::infinity();
    for (const Atom& s : atoms) {
        double mass = 0.0;
        for (const Atom& a : atoms) {
            if (a.position <= s.position) mass += a.weight;
        }
        if (mass > p) best = std::min(best, s.position);
    }
    return best;
}

/// Quadratic cost of the monotone (north-west corner) coupling between two
/// 1-D measures, square-rooted: the Wasserstein-2 distance on the line.
inline double monotone_coupling_w2(std::vector<Atom> a, std::vector<Atom> b) {
    auto by_pos = [](const Atom& l, const Atom& r) { return l.position < r.position; };
    std::sort(a.begin(), a.end(), by_pos);
    std::sort(b.begin(), b.end(), by_pos);
    std::size_t i = 0, j = 0;
    double ra = a.empty() ? 0.0 : a[0].weight;
    double rb = b.empty() ? 0.0 : b[0].weight;
    double cost = 0.0;
    while (i < a.size() && j < b.size()) {
        const double moved = std::min(ra, rb);
        const double gap = a[i].position - b[j].position;
        cost += moved * gap * gap;
        ra -= moved;
        rb -= moved;
        // Advance whichever side is exhausted (within round-off).
        if (ra <= 1e-15 && ++i < a.size()) ra = a[i].weight;
        if (rb <= 1e-15 && ++j < b.size()) rb = b[j].weight;
    }
    return std::sqrt(cost);
}

/// Random 1-D measure with n atoms whose weights are positive multiples of 1/M.
inline std::vector<Atom> random_lattice_measure(Rng& rng, std::size_t n, std::size_t M) {
    // Compose M into n positive parts by choosing n-1 distinct cut points.
    std::vector<std::size_t> cuts(M - 1);
    for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i] = i + 1;
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(n - 1);
    cuts.push_back(0);
    cuts.push_back(M);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Atom> atoms(n);
    std::vector<double> positions(n);
    for (auto& p : positions) p = uniform(rng, -5.0, 5.0);
    for (std::size_t i = 0; i < n; ++i) {
        atoms[i] = {positions[i], static_cast<double>(cuts[i + 1] - cuts[i]) / static_cast<double>(M)};
    }
    return atoms;
}

inline double sup_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double g = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) g = std::max(g, std::abs(a[k] - b[k]));
    return g;
}

}  // namespace nrcdt::testing
