#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include <nrcdt/error.hpp>
#include <nrcdt/radon.hpp>

#include "support.hpp"

using namespace nrcdt;
using nrcdt::testing::Rng;
using nrcdt::testing::uniform;

namespace {

constexpr double pi = std::numbers::pi;

DiscreteMeasure2D atoms2d(std::vector<Point2> pts, std::vector<double> w) { return make_measure_2d(std::move(pts), w); }

}  // namespace

TEST_CASE("slice projects single atoms") {
    const auto delta = atoms2d({{1, 0}}, {1});
    const auto along = slice(delta, Direction::from_angle(0.0));
    REQUIRE(along.size() == 1);
    CHECK(along.positions()[0] == 1.0);
    const auto across = slice(delta, Direction::from_vector(0, 1));
    CHECK(across.positions()[0] == 0.0);

    const auto pair = atoms2d({{0, 0}, {1, 1}}, {1, 1});
    const auto diag = slice(pair, Direction::from_angle(pi / 4));
    REQUIRE(diag.size() == 2);
    CHECK(diag.positions()[0] == 0.0);
    CHECK(diag.positions()[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(diag.weights()[0] == 0.5);
}

TEST_CASE("slice merges atoms that share a projection") {
    const auto square = atoms2d({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {1, 1, 1, 1});
    const auto x = slice(square, Direction::from_angle(0.0));
    REQUIRE(x.size() == 2);
    CHECK(x.weights()[0] == 0.5);
}

TEST_CASE("slice preserves mass and the mean projection identity") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = nrcdt::testing::random_measure(rng, 60);
        const auto d = Direction::from_angle(uniform(rng, -pi, pi));
        const auto s = slice(m, d);
        double mass = 0.0, mean = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            mass += s.weights()[i];
            mean += s.weights()[i] * s.positions()[i];
        }
        CHECK(std::abs(mass - 1.0) <= 1e-12);
        CHECK(std::abs(mean - d.dot(mean_vector(m))) <= 1e-12);
    }
}

TEST_CASE("apply_affine examples") {
    const auto delta = atoms2d({{1, 1}}, {1});
    CHECK(apply_affine(delta, AffineMap::identity()).points()[0] == Point2{1, 1});
    CHECK(apply_affine(delta, AffineMap::scaling(2, 2)).points()[0] == Point2{2, 2});

    const auto e1 = atoms2d({{1, 0}}, {1});
    const Point2 turned = apply_affine(e1, AffineMap::rotation(pi / 2)).points()[0];
    CHECK(std::abs(turned.x) <= 1e-15);
    CHECK(turned.y == 1.0);

    CHECK_THROWS_AS((void)AffineMap(1, 2, 2, 4), Error);
    try {
        (void)AffineMap(1, 2, 2, 4);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularMatrix);
    }
}

TEST_CASE("compose applies the inner map first") {
    const AffineMap shift = AffineMap::translation(1, 0);
    const AffineMap twice = AffineMap::scaling(2, 2);
    const Point2 p = twice.compose(shift)(Point2{1, 1});
    CHECK(p == Point2{4, 2});
}

TEST_CASE("remap_direction matches the closed-form rows") {
    // rotation by phi sends theta to theta - phi
    const double phi = 0.7, theta = 0.3;
    const auto rot = remap_direction(AffineMap::rotation(phi), Direction::from_angle(theta));
    CHECK(rot.direction.theta() == doctest::Approx(theta - phi).epsilon(1e-13));
    CHECK(rot.scale == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rot.shift == 0.0);

    const auto aniso = remap_direction(AffineMap::scaling(2.5, 0.5), Direction::from_angle(0.0));
    CHECK(aniso.direction.theta() == 0.0);
    CHECK(aniso.scale == 2.5);

    const auto shift = remap_direction(AffineMap::translation(3, 4), Direction::from_vector(1, 0));
    CHECK(shift.direction.ux() == 1.0);
    CHECK(shift.scale == 1.0);
    CHECK(shift.shift == 3.0);
}

TEST_CASE("table1_remap examples") {
    const std::array<double, 2> ab{2, 1};
    const auto a = table1_remap(TransformKind::anisotropic_scaling, ab, 0.0);
    CHECK(a.theta == 0.0);
    CHECK(a.scale == 2.0);
    CHECK(a.shift == 0.0);

    const std::array<double, 1> c{1};
    const auto s = table1_remap(TransformKind::vertical_shear, c, 0.0);
    CHECK(s.theta == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(s.scale == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s.shift == 0.0);

    const std::array<double, 1> zero{0};
    for (double theta : {-1.2, 0.0, 0.4, 1.5}) {
        const auto r = table1_remap(TransformKind::rotation, zero, theta);
        CHECK(r.theta == theta);
        CHECK(r.scale == 1.0);
        CHECK(r.shift == 0.0);
    }

    CHECK_THROWS_AS((void)table1_remap(TransformKind::rotation, zero, pi / 2), Error);
    CHECK_THROWS_AS((void)table1_remap(TransformKind::rotation, zero, -2.0), Error);
    const std::array<double, 2> bad{-1, 1};
    CHECK_THROWS_AS((void)table1_remap(TransformKind::anisotropic_scaling, bad, 0.0), Error);
}

TEST_CASE("table1_remap agrees with remap_direction") {
    Rng rng(77);
    const std::array kinds{TransformKind::translation, TransformKind::rotation, TransformKind::reflection,
                           TransformKind::anisotropic_scaling, TransformKind::vertical_shear};
    for (int trial = 0; trial < 1000; ++trial) {
        const TransformKind kind = kinds[static_cast<std::size_t>(trial) % kinds.size()];
        std::vector<double> params;
        switch (kind) {
            case TransformKind::translation: params = {uniform(rng, -3, 3), uniform(rng, -3, 3)}; break;
            case TransformKind::rotation:
            case TransformKind::reflection: params = {uniform(rng, -pi, pi)}; break;
            case TransformKind::anisotropic_scaling: params = {uniform(rng, 0.2, 5), uniform(rng, 0.2, 5)}; break;
            case TransformKind::vertical_shear: params = {uniform(rng, -3, 3)}; break;
        }
        const double theta = uniform(rng, -pi / 2 + 1e-3, pi / 2 - 1e-3);
        const auto closed = table1_remap(kind, params, theta);
        const auto general = remap_direction(table1_affine(kind, params), Direction::from_angle(theta));
        CHECK(std::abs(std::cos(closed.theta) - general.direction.ux()) <= 1e-12);
        CHECK(std::abs(std::sin(closed.theta) - general.direction.uy()) <= 1e-12);
        CHECK(std::abs(closed.scale - general.scale) <= 1e-12);
        CHECK(std::abs(closed.shift - general.shift) <= 1e-12);
    }
}

TEST_CASE("slice of a pushforward is the rescaled slice at the remapped direction") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const auto m = nrcdt::testing::random_measure(rng, 50);
        const AffineMap T = nrcdt::testing::random_invertible(rng);
        const auto d = Direction::from_angle(uniform(rng, 0, 2 * pi));
        const auto lhs = slice(apply_affine(m, T), d);
        const auto remap = remap_direction(T, d);
        const auto rhs = slice(m, remap.direction);
        REQUIRE(lhs.size() == rhs.size());
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            CHECK(std::abs(lhs.positions()[i] - (remap.scale * rhs.positions()[i] + remap.shift)) <= 1e-10);
            CHECK(std::abs(lhs.weights()[i] - rhs.weights()[i]) <= 1e-10);
        }
    }
}

TEST_CASE("antipodal_reflect") {
    const auto m = DiscreteMeasure1D::from_atoms(std::vector<double>{1, 2}, std::vector<double>{0.3, 0.7});
    const auto r = antipodal_reflect(m);
    REQUIRE(r.size() == 2);
    CHECK(r.positions()[0] == -2.0);
    CHECK(r.positions()[1] == -1.0);
    CHECK(r.weights()[0] == doctest::Approx(0.7));
    CHECK(r.weights()[1] == doctest::Approx(0.3));

    const auto point = DiscreteMeasure1D::from_atoms(std::vector<double>{0}, std::vector<double>{1});
    CHECK(antipodal_reflect(point).positions()[0] == 0.0);

    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = slice(nrcdt::testing::random_measure(rng, 40), Direction::from_angle(uniform(rng, 0, pi)));
        const auto back = antipodal_reflect(antipodal_reflect(s));
        REQUIRE(back.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(back.positions()[i] == s.positions()[i]);
            CHECK(std::abs(back.weights()[i] - s.weights()[i]) <= 1e-15);
        }
    }
}

TEST_CASE("antipodal reflection equals slicing along the opposite direction") {
    Rng rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = nrcdt::testing::random_measure(rng, 40);
        const double theta = uniform(rng, 0, pi);
        const auto a = antipodal_reflect(slice(m, Direction::from_angle(theta)));
        const auto b = slice(m, Direction::from_angle(theta + pi));
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.positions()[i] - b.positions()[i]) <= 1e-14);
    }
}

TEST_CASE("AngleGrid") {
    const AngleGrid g(8);
    REQUIRE(g.count() == 8);
    CHECK(g.angles()[0] == 0.0);
    for (std::size_t j = 1; j < g.count(); ++j) {
        CHECK(g.angles()[j] > g.angles()[j - 1]);
        CHECK(std::abs(g.angles()[j] - g.angles()[j - 1] - pi / 8) <= 1e-12);
    }
    CHECK(g.angles().back() < pi);
    CHECK_THROWS_AS(AngleGrid(0), Error);
}
