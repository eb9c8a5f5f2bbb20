#pragma once

#include <Eigen/Dense>
#include <optional>

#include "basin/inference.hpp"
#include "basin/report.hpp"
#include "basin/restarts.hpp"

namespace basin {

/// Simulated mixed-logit demand: utility u_{jr} = delta_j - alpha_r p_j over
/// R consumer draws, an outside option at utility 0, multi-product firms
/// described by a 0/1 ownership matrix, and constant marginal costs.
struct MixedLogitModel {
    int J = 0;
    Vector delta;                // mean utilities
    Vector price_coefs;          // alpha_r > 0, one per draw
    Eigen::MatrixXd ownership;   // J x J, symmetric, unit diagonal
    Vector costs;                // c_j > 0

    int draws() const { return static_cast<int>(price_coefs.size()); }
    void validate() const;
};

struct Shares {
    Vector inside;
    double outside = 0.0;
};

/// Market shares s_j(p) = (1/R) sum_r exp(delta_j - alpha_r p_j) /
/// (1 + sum_l exp(delta_l - alpha_r p_l)), log-sum-exp stabilized.
Shares shares(const MixedLogitModel& model, const Point& p);

/// ds_j / dp_l = (1/R) sum_r alpha_r s_{jr} (s_{lr} - 1{j=l}).
Eigen::MatrixXd share_jacobian(const MixedLogitModel& model, const Point& p);

/// First-order conditions s(p) + (O . J_s(p))^T (p - c); zero exactly at
/// Bertrand-Nash candidates.
Vector foc(const MixedLogitModel& model, const Point& p);
double foc_residual_inf(const MixedLogitModel& model, const Point& p);

/// Markup map with p = c + zeta(p) iff foc(p) = 0: the ownership-masked
/// Lambda/Gamma split of the share Jacobian solved for the own-derivative
/// part.
Vector zeta(const MixedLogitModel& model, const Point& p);

/// Price box [c, c + margin_cap]; the cap must not bind at equilibrium and
/// is validated after solving.
ConvexDomain build_price_domain(const MixedLogitModel& model, double margin_cap);

/// Elementwise exp: the standard positive parametrization of marginal costs,
/// handy when generating model instances from unconstrained parameters.
Vector costs_from_log(const Vector& log_costs);

struct EquilibriumOptions {
    long n_restarts = 100;
    std::uint64_t seed = 0;
    std::optional<SolverConfig> solver;  // default: SolverConfig::defaults_for(price box)
    double eps_obs = 0.0;                // <= 0: 1e-6 * box diameter
    double margin_cap = 50.0;
    double foc_tol = 1e-6;
    PriorsSpec priors;
    int workers = 0;
};

struct EquilibriumResult {
    bool all_dagger = false;
    Point price;
    Vector inside_shares;
    double outside_share = 0.0;
    double foc_residual = 0.0;
    OutcomeTally tally;
    HnReport hn;
    std::vector<double> cluster_foc_residuals;
    std::optional<HnPosteriors> posteriors;  // present when H_n holds
};

/// Runs the constrained Picard flow Q(p) = c + zeta(p) - p on the price box
/// from random restarts, identifies terminal prices, checks H_n, and (when
/// it holds) attaches the basin-size, spike-slab and MFM posteriors.
EquilibriumResult equilibrium_pipeline(const MixedLogitModel& model, const EquilibriumOptions& options);

}  // namespace basin
