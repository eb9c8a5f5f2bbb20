#include <doctest.h>

#include <algorithm>
#include <random>

#include "basin/geometry.hpp"
#include "basin/special.hpp"

using namespace basin;

namespace {

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

const ConvexDomain unit_box = ConvexDomain::box(vec({0.0, 0.0}), vec({1.0, 1.0}));
const ConvexDomain unit_ball = ConvexDomain::ball(vec({0.0, 0.0}), 1.0);

}  // namespace

TEST_CASE("contains: boxes are closed, balls respect the radius") {
    CHECK(unit_box.contains(vec({0.5, 0.5})));
    CHECK(unit_box.contains(vec({0.0, 1.0})));  // boundary point
    CHECK_FALSE(unit_ball.contains(vec({1.1, 0.0})));
    CHECK(unit_ball.contains(vec({1.0, 0.0})));
    CHECK(ConvexDomain::all(3).contains(vec({5.0, -7.0, 1e8})));
    CHECK_THROWS_AS((void)unit_box.contains(vec({0.5})), std::invalid_argument);
}

TEST_CASE("project: clamp, radial scaling, idempotence") {
    CHECK(unit_box.project(vec({2.0, 0.5})) == vec({1.0, 0.5}));
    CHECK(unit_ball.project(vec({2.0, 0.0})) == vec({1.0, 0.0}));
    const Point inside = vec({0.25, 0.75});
    CHECK(unit_box.project(inside) == inside);
    CHECK(unit_ball.project(vec({0.3, -0.2})) == vec({0.3, -0.2}));
}

TEST_CASE("project is idempotent and non-expansive on random pairs") {
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    for (const ConvexDomain& domain : {unit_box, unit_ball}) {
        for (int trial = 0; trial < 200; ++trial) {
            const Point x = vec({unif(eng), unif(eng)});
            const Point y = vec({unif(eng), unif(eng)});
            const Point px = domain.project(x);
            const Point py = domain.project(y);
            CHECK(domain.contains(px));
            CHECK((domain.project(px) - px).norm() == doctest::Approx(0.0).epsilon(1e-15));
            CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
        }
    }
}

TEST_CASE("tangent_cone_project: active faces, ball boundary, interior identity") {
    // active lower face blocks the outward component
    CHECK(unit_box.tangent_cone_project(vec({0.0, 0.5}), vec({-1.0, 1.0})) == vec({0.0, 1.0}));
    // ball boundary: v - <v,n>_+ n
    CHECK((unit_ball.tangent_cone_project(vec({1.0, 0.0}), vec({1.0, 1.0})) - vec({0.0, 1.0})).norm() <
          1e-15);
    // interior: identity
    CHECK(unit_box.tangent_cone_project(vec({0.5, 0.5}), vec({3.0, -2.0})) == vec({3.0, -2.0}));
    CHECK(unit_ball.tangent_cone_project(vec({0.1, 0.2}), vec({3.0, -2.0})) == vec({3.0, -2.0}));
    // inward-pointing velocities pass through on the boundary
    CHECK(unit_ball.tangent_cone_project(vec({1.0, 0.0}), vec({-1.0, 0.3})) == vec({-1.0, 0.3}));
    CHECK_THROWS_AS(unit_box.tangent_cone_project(vec({2.0, 0.5}), vec({1.0, 0.0})),
                    std::invalid_argument);
}

TEST_CASE("tangent cone output is first-order feasible") {
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double t = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        const Vector v = vec({unif(eng), unif(eng)});
        for (const Point& x : {vec({0.0, 0.5}), vec({1.0, 0.3}), vec({0.7, 1.0}), vec({0.0, 0.0})}) {
            const Vector w = unit_box.tangent_cone_project(x, v);
            const Point stepped = x + t * w;
            CHECK((unit_box.project(stepped) - stepped).norm() <= 1e-8);
        }
        const Point on_sphere = vec({std::cos(trial * 0.1), std::sin(trial * 0.1)});
        const Vector w = unit_ball.tangent_cone_project(on_sphere, v);
        const Point stepped = on_sphere + t * w;
        CHECK((unit_ball.project(stepped) - stepped).norm() <= 1e-8);
    }
}

TEST_CASE("Moreau decomposition on the ball boundary") {
    std::mt19937_64 eng(13);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double angle = unif(eng);
        const Point x = vec({std::cos(angle), std::sin(angle)});
        const Vector n = unit_ball.boundary_normal(x);
        const Vector v = vec({unif(eng), unif(eng)});
        const Vector w = unit_ball.tangent_cone_project(x, v);
        const double outward = std::max(0.0, v.dot(n));
        CHECK((v - (w + outward * n)).norm() <= 1e-14);
    }
}

TEST_CASE("boundary_normal: ball, box face, box corner") {
    CHECK((unit_ball.boundary_normal(vec({0.0, 1.0})) - vec({0.0, 1.0})).norm() < 1e-15);
    CHECK(unit_box.boundary_normal(vec({0.5, 0.0})) == vec({0.0, -1.0}));
    CHECK(unit_box.boundary_normal(vec({1.0, 0.5})) == vec({1.0, 0.0}));
    CHECK_THROWS_AS(unit_box.boundary_normal(vec({0.0, 0.0})), std::invalid_argument);  // corner
    CHECK_THROWS_AS(unit_box.boundary_normal(vec({0.5, 0.5})), std::invalid_argument);  // interior
    CHECK_THROWS_AS(unit_ball.boundary_normal(vec({0.2, 0.2})), std::invalid_argument);
}

TEST_CASE("sample_initial: support, determinism, moments") {
    const InitialSampler sampler = InitialSampler::uniform(42);
    const ConvexDomain box = ConvexDomain::box(vec({0.0, 0.0}), vec({1.0, 1.0}));

    const int n = 10000;
    Vector mean = Vector::Zero(2);
    for (int i = 0; i < n; ++i) {
        const Point x = sampler.sample(box, static_cast<std::uint64_t>(i));
        CHECK(box.contains(x));
        mean += x;
    }
    mean /= n;
    const double band = 3.0 * std::sqrt(1.0 / 12.0) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(mean[0] - 0.5) <= band);
    CHECK(std::abs(mean[1] - 0.5) <= band);

    // deterministic per (seed, index)
    CHECK(sampler.sample(box, 17) == sampler.sample(box, 17));
    CHECK(sampler.sample(box, 17) != sampler.sample(box, 18));
    CHECK(sampler.sample(box, 17) != InitialSampler::uniform(43).sample(box, 17));
}

TEST_CASE("sample_initial: ball draws stay inside, sub-box must fit") {
    const InitialSampler sampler = InitialSampler::uniform(3);
    for (int i = 0; i < 2000; ++i) CHECK(unit_ball.contains(sampler.sample(unit_ball, i)));

    const InitialSampler sub = InitialSampler::uniform_on_box(vec({0.2, 0.2}), vec({0.4, 0.4}), 3);
    for (int i = 0; i < 200; ++i) {
        const Point x = sub.sample(unit_box, i);
        CHECK(x[0] >= 0.2);
        CHECK(x[0] <= 0.4);
    }
    const InitialSampler bad = InitialSampler::uniform_on_box(vec({0.5, 0.5}), vec({2.0, 2.0}), 3);
    CHECK_THROWS_AS(bad.sample(unit_box, 0), std::invalid_argument);
    CHECK_THROWS_AS(InitialSampler::uniform(1).sample(ConvexDomain::all(2), 0), std::invalid_argument);
}

TEST_CASE("sample_initial marginals pass a KS test against uniform") {
    const InitialSampler sampler = InitialSampler::uniform(2024);
    const ConvexDomain box = ConvexDomain::box(vec({0.0, 0.0}), vec({1.0, 1.0}));
    const std::size_t n = 100000;
    std::vector<double> first(n), second(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point x = sampler.sample(box, i);
        first[i] = x[0];
        second[i] = x[1];
    }
    const auto identity = [](double u) { return u; };
    CHECK(ks_test(std::move(first), identity).p_value > 0.01);
    CHECK(ks_test(std::move(second), identity).p_value > 0.01);
}

TEST_CASE("domain constructors validate their inputs") {
    CHECK_THROWS_AS(ConvexDomain::box(vec({1.0}), vec({1.0})), std::invalid_argument);
    CHECK_THROWS_AS(ConvexDomain::box(vec({2.0}), vec({1.0})), std::invalid_argument);
    CHECK_THROWS_AS(ConvexDomain::ball(vec({0.0}), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ConvexDomain::all(0), std::invalid_argument);
    CHECK_THROWS_AS(InitialSampler::uniform_on_box(vec({0.0}), vec({0.0}), 1), std::invalid_argument);
}
