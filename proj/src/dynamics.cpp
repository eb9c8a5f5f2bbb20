#include "basin/dynamics.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace basin {

VectorFieldSpec make_gradient_flow(std::function<Vector(const Point&)> grad_f, std::string source) {
    VectorFieldSpec f;
    f.eval = [g = std::move(grad_f)](const Point& x) -> Vector { return -g(x); };
    f.kind = FieldKind::GradientFlow;
    f.source = std::move(source);
    return f;
}

VectorFieldSpec make_picard_flow(std::function<Point(const Point&)> map_f, std::string source) {
    VectorFieldSpec f;
    f.eval = [m = std::move(map_f)](const Point& x) -> Vector { return m(x) - x; };
    f.kind = FieldKind::PicardFlow;
    f.source = std::move(source);
    return f;
}

VectorFieldSpec make_raw_field(std::function<Vector(const Point&)> eval, std::string source) {
    VectorFieldSpec f;
    f.eval = std::move(eval);
    f.kind = FieldKind::Raw;
    f.source = std::move(source);
    return f;
}

SolverConfig SolverConfig::defaults_for(const ConvexDomain& domain) {
    SolverConfig cfg;
    cfg.h = 1e-2 * domain.diameter_hint();
    return cfg;
}

void SolverConfig::validate() const {
    if (!(h > 0.0)) throw std::invalid_argument("solver config: h must be positive");
    if (!(residual_tol > 0.0)) throw std::invalid_argument("solver config: residual_tol must be positive");
    if (stall_window < 1) throw std::invalid_argument("solver config: stall_window must be >= 1");
    if (max_steps < 1) throw std::invalid_argument("solver config: max_steps must be >= 1");
    if (!(blowup_norm > 0.0)) throw std::invalid_argument("solver config: blowup_norm must be positive");
}

TerminalOutcome TerminalOutcome::make_converged(Point x, double residual, long steps) {
    TerminalOutcome out;
    out.converged = true;
    out.point = std::move(x);
    out.residual = residual;
    out.steps = steps;
    return out;
}

TerminalOutcome TerminalOutcome::make_dagger(DaggerReason reason, long steps) {
    TerminalOutcome out;
    out.converged = false;
    out.reason = reason;
    out.steps = steps;
    return out;
}

double projected_residual(const ConvexDomain& domain, const VectorFieldSpec& field, const Point& x) {
    return domain.tangent_cone_project(x, field.eval(x)).norm();
}

TerminalOutcome integrate(const ConvexDomain& domain, const VectorFieldSpec& field, const Point& x0,
                          const SolverConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    if (!domain.contains(x0)) throw std::invalid_argument("integrate: x0 outside the domain");

    Point x = x0;
    int streak = 0;
    long step = 0;
    for (;;) {
        const Vector q = field.eval(x);
        if (!q.allFinite()) return TerminalOutcome::make_dagger(DaggerReason::NonFinite, step);
        const double res = domain.tangent_cone_project(x, q).norm();
        if (res <= cfg.residual_tol) {
            if (++streak >= cfg.stall_window) return TerminalOutcome::make_converged(x, res, step);
        } else {
            streak = 0;
        }
        if (step >= cfg.max_steps) return TerminalOutcome::make_dagger(DaggerReason::MaxSteps, step);
        x = domain.project(x + cfg.h * q);
        ++step;
        if (!x.allFinite()) return TerminalOutcome::make_dagger(DaggerReason::NonFinite, step);
        if (x.norm() > cfg.blowup_norm) return TerminalOutcome::make_dagger(DaggerReason::Blowup, step);
        assert(domain.contains(x));
        if (observer) observer(step, x);
    }
}

Solver::Solver(ConvexDomain domain, VectorFieldSpec field, SolverConfig cfg)
    : domain_(std::move(domain)), field_(std::move(field)), cfg_(cfg) {
    cfg_.validate();
}

TerminalOutcome Solver::operator()(const Point& x0) const { return integrate(domain_, field_, x0, cfg_); }

Solver solver_from(ConvexDomain domain, VectorFieldSpec field, SolverConfig cfg) {
    return Solver(std::move(domain), std::move(field), cfg);
}

}  // namespace basin
