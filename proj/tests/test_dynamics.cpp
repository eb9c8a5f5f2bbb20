#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "basin/dynamics.hpp"

using namespace basin;

namespace {

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

Vector scalar(double x) { return vec({x}); }

// gradient of f(x) = (x^2 - 1)^2
Vector double_well_grad(const Point& x) { return scalar(4.0 * x[0] * (x[0] * x[0] - 1.0)); }

const ConvexDomain segment = ConvexDomain::box(scalar(-2.0), scalar(2.0));

// Test-only oracle: classic RK4 on the unprojected ODE, valid while the
// trajectory stays interior.
Point rk4_flow(const VectorFieldSpec& field, Point x, double t_end, double dt) {
    for (double t = 0.0; t < t_end; t += dt) {
        const Vector k1 = field.eval(x);
        const Vector k2 = field.eval(x + 0.5 * dt * k1);
        const Vector k3 = field.eval(x + 0.5 * dt * k2);
        const Vector k4 = field.eval(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

}  // namespace

TEST_CASE("make_gradient_flow negates the gradient") {
    const auto quad = make_gradient_flow([](const Point& x) -> Vector { return x; });
    CHECK(quad.kind == FieldKind::GradientFlow);
    CHECK(quad.eval(vec({2.0, -3.0})) == vec({-2.0, 3.0}));

    const auto well = make_gradient_flow(double_well_grad);
    CHECK(well.eval(scalar(0.5))[0] == doctest::Approx(-4.0 * 0.5 * (0.25 - 1.0)));

    const auto flat = make_gradient_flow([](const Point& x) -> Vector { return Vector::Zero(x.size()); });
    CHECK(flat.eval(vec({1.0, 2.0})).norm() == 0.0);
}

TEST_CASE("make_picard_flow subtracts the identity") {
    const auto id = make_picard_flow([](const Point& x) -> Point { return x; });
    CHECK(id.kind == FieldKind::PicardFlow);
    CHECK(id.eval(vec({0.4, -0.8})).norm() == 0.0);

    const auto halve = make_picard_flow([](const Point& x) -> Point { return 0.5 * x; });
    CHECK(halve.eval(scalar(1.0))[0] == doctest::Approx(-0.5));
}

TEST_CASE("projected_residual vanishes at roots and blocked faces") {
    const auto well = make_gradient_flow(double_well_grad);
    CHECK(projected_residual(segment, well, scalar(1.0)) == 0.0);
    CHECK(projected_residual(segment, well, scalar(0.0)) == 0.0);  // saddle
    CHECK(projected_residual(segment, well, scalar(0.5)) > 0.0);

    // outward flow blocked by the lower face
    const ConvexDomain unit = ConvexDomain::box(scalar(0.0), scalar(1.0));
    const auto down = make_raw_field([](const Point&) { return scalar(-1.0); });
    CHECK(projected_residual(unit, down, scalar(0.0)) == 0.0);
    CHECK(projected_residual(unit, down, scalar(0.5)) == 1.0);
    CHECK_THROWS_AS(projected_residual(unit, down, scalar(2.0)), std::invalid_argument);
}

TEST_CASE("integrate: double well converges to the basin-side minimum") {
    const auto well = make_gradient_flow(double_well_grad);
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.residual_tol = 1e-8;

    const TerminalOutcome plus = integrate(segment, well, scalar(0.5), cfg);
    REQUIRE(plus.converged);
    CHECK(std::abs(plus.point[0] - 1.0) <= 1e-6);
    CHECK(plus.residual <= cfg.residual_tol);

    const TerminalOutcome minus = integrate(segment, well, scalar(-0.5), cfg);
    REQUIRE(minus.converged);
    CHECK(std::abs(minus.point[0] + 1.0) <= 1e-6);

    // high-accuracy ODE oracle agrees about the terminal point
    const Point oracle = rk4_flow(well, scalar(0.5), 30.0, 1e-3);
    CHECK(std::abs(plus.point[0] - oracle[0]) <= 1e-6);
}

TEST_CASE("integrate: rotation field never converges") {
    const ConvexDomain disk = ConvexDomain::ball(vec({0.0, 0.0}), 2.0);
    const auto rotation = make_raw_field([](const Point& x) { return vec({-x[1], x[0]}); });
    SolverConfig cfg = SolverConfig::defaults_for(disk);
    cfg.max_steps = 20000;
    const TerminalOutcome outcome = integrate(disk, rotation, vec({1.0, 0.0}), cfg);
    CHECK_FALSE(outcome.converged);
    CHECK(outcome.reason == DaggerReason::MaxSteps);
    CHECK(outcome.steps == cfg.max_steps);
    // analytic solution of the ODE is the unit circle: the residual along it
    // stays at radius ~1 and can never pass the tolerance
    const Point analytic = vec({std::cos(1.0), std::sin(1.0)});
    CHECK(projected_residual(disk, rotation, analytic) == doctest::Approx(1.0));
}

TEST_CASE("integrate: blowup and non-finite daggers") {
    const ConvexDomain line = ConvexDomain::all(1);
    const auto expand = make_raw_field([](const Point& x) { return scalar(x[0]); });
    SolverConfig cfg;
    cfg.h = 1.0;
    cfg.blowup_norm = 1e6;
    const TerminalOutcome blow = integrate(line, expand, scalar(1.0), cfg);
    CHECK_FALSE(blow.converged);
    CHECK(blow.reason == DaggerReason::Blowup);

    const auto poison = make_raw_field([](const Point&) { return scalar(std::nan("")); });
    const TerminalOutcome bad = integrate(line, poison, scalar(1.0), cfg);
    CHECK_FALSE(bad.converged);
    CHECK(bad.reason == DaggerReason::NonFinite);
}

TEST_CASE("integrate: boundary-pinned root is detected via the projected residual") {
    const ConvexDomain unit = ConvexDomain::box(scalar(0.0), scalar(1.0));
    const auto down = make_raw_field([](const Point&) { return scalar(-1.0); });
    SolverConfig cfg = SolverConfig::defaults_for(unit);
    const TerminalOutcome outcome = integrate(unit, down, scalar(0.7), cfg);
    REQUIRE(outcome.converged);
    CHECK(outcome.point[0] == 0.0);
    CHECK(outcome.residual == 0.0);
}

TEST_CASE("Lyapunov descent for gradient flows below the stability threshold") {
    const auto well = make_gradient_flow(double_well_grad);
    const auto bowl = make_gradient_flow([](const Point& x) -> Vector { return 3.0 * x; });
    struct Case {
        const VectorFieldSpec* field;
        std::function<double(double)> f;
    };
    const std::vector<Case> cases = {
        {&well, [](double x) { return (x * x - 1.0) * (x * x - 1.0); }},
        {&bowl, [](double x) { return 1.5 * x * x; }},
    };
    for (const Case& c : cases) {
        SolverConfig cfg;
        cfg.h = 5e-3;  // well below 2 / max f''
        double prev = c.f(0.9);
        const auto observer = [&](long, const Point& x) {
            const double value = c.f(x[0]);
            CHECK(value <= prev + 1e-12);
            prev = value;
        };
        (void)integrate(segment, *c.field, scalar(0.9), cfg, observer);
    }
}

TEST_CASE("Picard contraction: geometric decay to the analytic fixed point") {
    Eigen::MatrixXd a(2, 2);
    a << 0.3, 0.2, -0.1, 0.4;  // ||A|| < 1
    const Vector b = vec({0.5, -0.2});
    const auto field = make_picard_flow([a, b](const Point& x) -> Point { return a * x + b; });
    const Point fixed = (Eigen::MatrixXd::Identity(2, 2) - a).colPivHouseholderQr().solve(b);

    const ConvexDomain domain = ConvexDomain::box(vec({-5.0, -5.0}), vec({5.0, 5.0}));
    SolverConfig cfg;
    cfg.h = 0.5;
    cfg.residual_tol = 1e-10;

    const double contraction = 1.0 - cfg.h * (1.0 - a.norm());
    double prev_err = -1.0;
    const auto observer = [&](long, const Point& x) {
        const double err = (x - fixed).norm();
        if (prev_err >= 0.0 && prev_err > 1e-14) CHECK(err <= contraction * prev_err * (1.0 + 1e-9));
        prev_err = err;
    };
    const TerminalOutcome outcome = integrate(domain, field, vec({4.0, -3.0}), cfg, observer);
    REQUIRE(outcome.converged);
    CHECK((outcome.point - fixed).norm() <= 10.0 * cfg.residual_tol);
}

TEST_CASE("solver_from wraps integrate and stays deterministic") {
    const auto well = make_gradient_flow(double_well_grad);
    SolverConfig cfg;
    cfg.h = 1e-3;
    const Solver solver = solver_from(segment, well, cfg);

    const TerminalOutcome direct = integrate(segment, well, scalar(0.5), cfg);
    const TerminalOutcome wrapped = solver(scalar(0.5));
    REQUIRE(wrapped.converged);
    CHECK(wrapped.point[0] == direct.point[0]);
    CHECK(wrapped.residual == direct.residual);
    CHECK(wrapped.steps == direct.steps);

    const TerminalOutcome again = solver(scalar(0.5));
    CHECK(again.point[0] == wrapped.point[0]);  // bit-identical

    CHECK_THROWS_AS(solver(scalar(3.0)), std::invalid_argument);
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.h = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.h = 0.1;
    cfg.stall_window = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
