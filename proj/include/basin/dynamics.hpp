#pragma once

#include <functional>
#include <limits>
#include <string>

#include "basin/geometry.hpp"

namespace basin {

enum class FieldKind { GradientFlow, PicardFlow, Raw };

/// A vector field Q on the domain, together with provenance for logs and
/// manifests.
struct VectorFieldSpec {
    std::function<Vector(const Point&)> eval;
    FieldKind kind = FieldKind::Raw;
    std::string source;
};

/// Q = -grad f: the projected flow descends f.
VectorFieldSpec make_gradient_flow(std::function<Vector(const Point&)> grad_f,
                                   std::string source = "gradient-flow");

/// Q = F(x) - x: roots of Q are fixed points of F.
VectorFieldSpec make_picard_flow(std::function<Point(const Point&)> map_f,
                                 std::string source = "picard-flow");

VectorFieldSpec make_raw_field(std::function<Vector(const Point&)> eval,
                               std::string source = "raw-field");

struct SolverConfig {
    double h = 1e-2;
    double residual_tol = 1e-8;
    int stall_window = 10;
    long max_steps = 1000000;
    double blowup_norm = 1e9;

    /// h scaled to 1e-2 of the domain's characteristic length; everything
    /// else at the documented defaults.
    static SolverConfig defaults_for(const ConvexDomain& domain);

    void validate() const;
};

enum class DaggerReason { MaxSteps, Blowup, NonFinite };

/// Result of one solver run: either a terminal point with its projected
/// residual, or the graveyard outcome with a reason.
struct TerminalOutcome {
    bool converged = false;
    Point point;
    double residual = std::numeric_limits<double>::quiet_NaN();
    long steps = 0;
    DaggerReason reason = DaggerReason::MaxSteps;

    static TerminalOutcome make_converged(Point x, double residual, long steps);
    static TerminalOutcome make_dagger(DaggerReason reason, long steps);
};

/// || Pi_{TC_X(x)} Q(x) ||_2 — zero exactly at roots of the projected field.
double projected_residual(const ConvexDomain& domain, const VectorFieldSpec& field, const Point& x);

using StepObserver = std::function<void(long step, const Point& x)>;

/// Projected explicit Euler: x_{k+1} = project(x_k + h Q(x_k)). Convergence
/// is declared once the projected residual stays below residual_tol for
/// stall_window consecutive iterates, so boundary-pinned roots are detected.
/// Deterministic in its arguments.
TerminalOutcome integrate(const ConvexDomain& domain, const VectorFieldSpec& field, const Point& x0,
                          const SolverConfig& cfg, const StepObserver& observer = nullptr);

/// The dynamic solver g_Q as a reusable value: domain, field and config
/// bundled behind operator().
class Solver {
public:
    Solver(ConvexDomain domain, VectorFieldSpec field, SolverConfig cfg);

    TerminalOutcome operator()(const Point& x0) const;

    const ConvexDomain& domain() const { return domain_; }
    const VectorFieldSpec& field() const { return field_; }
    const SolverConfig& config() const { return cfg_; }

private:
    ConvexDomain domain_;
    VectorFieldSpec field_;
    SolverConfig cfg_;
};

Solver solver_from(ConvexDomain domain, VectorFieldSpec field, SolverConfig cfg);

}  // namespace basin
