#include "basin/blp.hpp"

#include <cmath>
#include <stdexcept>

namespace basin {

namespace {

// Per-draw choice probabilities s_{jr}, J x R.
Eigen::MatrixXd draw_shares(const MixedLogitModel& model, const Point& p) {
    const int j_count = model.J;
    const int r_count = model.draws();
    Eigen::MatrixXd s(j_count, r_count);
    Vector u(j_count);
    for (int r = 0; r < r_count; ++r) {
        const double alpha_r = model.price_coefs[r];
        double max_u = 0.0;  // outside option utility
        for (int j = 0; j < j_count; ++j) {
            u[j] = model.delta[j] - alpha_r * p[j];
            if (!std::isfinite(u[j])) throw std::invalid_argument("shares: non-finite utilities");
            if (u[j] > max_u) max_u = u[j];
        }
        double denom = std::exp(-max_u);  // outside option
        for (int j = 0; j < j_count; ++j) {
            u[j] = std::exp(u[j] - max_u);
            denom += u[j];
        }
        s.col(r) = u / denom;
    }
    return s;
}

}  // namespace

void MixedLogitModel::validate() const {
    if (J < 1) throw std::invalid_argument("mixed logit: J must be >= 1");
    if (delta.size() != J || costs.size() != J)
        throw std::invalid_argument("mixed logit: delta and costs must have length J");
    if (!delta.allFinite()) throw std::invalid_argument("mixed logit: delta must be finite");
    if (price_coefs.size() < 1) throw std::invalid_argument("mixed logit: needs at least one price draw");
    if (!(price_coefs.array() > 0.0).all() || !price_coefs.allFinite())
        throw std::invalid_argument("mixed logit: price coefficients must be positive");
    if (!(costs.array() > 0.0).all() || !costs.allFinite())
        throw std::invalid_argument("mixed logit: costs must be positive");
    if (ownership.rows() != J || ownership.cols() != J)
        throw std::invalid_argument("mixed logit: ownership must be J x J");
    for (int j = 0; j < J; ++j) {
        if (ownership(j, j) != 1.0)
            throw std::invalid_argument("mixed logit: ownership diagonal must be all ones");
        for (int l = 0; l < J; ++l) {
            const double o = ownership(j, l);
            if (o != 0.0 && o != 1.0) throw std::invalid_argument("mixed logit: ownership must be 0/1");
            if (o != ownership(l, j)) throw std::invalid_argument("mixed logit: ownership must be symmetric");
        }
    }
}

Shares shares(const MixedLogitModel& model, const Point& p) {
    model.validate();
    if (p.size() != model.J) throw std::invalid_argument("shares: price dimension mismatch");
    const Eigen::MatrixXd s = draw_shares(model, p);
    Shares out;
    out.inside = s.rowwise().mean();
    out.outside = 1.0 - out.inside.sum();
    return out;
}

Eigen::MatrixXd share_jacobian(const MixedLogitModel& model, const Point& p) {
    model.validate();
    if (p.size() != model.J) throw std::invalid_argument("share_jacobian: price dimension mismatch");
    const Eigen::MatrixXd s = draw_shares(model, p);
    const int r_count = model.draws();
    // Gamma_{jl} = (1/R) sum_r alpha_r s_{jr} s_{lr};  Lambda_j = (1/R) sum_r alpha_r s_{jr}
    Eigen::MatrixXd jac = s * model.price_coefs.asDiagonal() * s.transpose() / r_count;
    const Vector own = (s * model.price_coefs) / r_count;
    jac.diagonal() -= own;
    return jac;
}

Vector foc(const MixedLogitModel& model, const Point& p) {
    const Shares s = shares(model, p);
    const Eigen::MatrixXd jac = share_jacobian(model, p);
    const Eigen::MatrixXd masked = model.ownership.cwiseProduct(jac);
    return s.inside + masked.transpose() * (p - model.costs);
}

double foc_residual_inf(const MixedLogitModel& model, const Point& p) {
    return foc(model, p).lpNorm<Eigen::Infinity>();
}

Vector zeta(const MixedLogitModel& model, const Point& p) {
    model.validate();
    if (p.size() != model.J) throw std::invalid_argument("zeta: price dimension mismatch");
    const Eigen::MatrixXd s = draw_shares(model, p);
    const int r_count = model.draws();
    const Vector mean_shares = s.rowwise().mean();
    const Vector lambda = (s * model.price_coefs) / r_count;
    for (int j = 0; j < model.J; ++j)
        if (!(lambda[j] > 1e-300))
            throw std::runtime_error("zeta: singular own-derivative matrix (vanished shares)");
    const Eigen::MatrixXd gamma = s * model.price_coefs.asDiagonal() * s.transpose() / r_count;
    const Eigen::MatrixXd masked = model.ownership.cwiseProduct(gamma);
    const Vector rhs = masked * (p - model.costs) + mean_shares;
    return rhs.cwiseQuotient(lambda);
}

ConvexDomain build_price_domain(const MixedLogitModel& model, double margin_cap) {
    model.validate();
    if (!(margin_cap > 0.0)) throw std::invalid_argument("build_price_domain: margin_cap must be positive");
    return ConvexDomain::box(model.costs, model.costs.array() + margin_cap);
}

Vector costs_from_log(const Vector& log_costs) {
    if (!log_costs.allFinite()) throw std::invalid_argument("costs_from_log: parameters must be finite");
    return log_costs.array().exp();
}

EquilibriumResult equilibrium_pipeline(const MixedLogitModel& model, const EquilibriumOptions& options) {
    model.validate();
    options.priors.validate();
    const ConvexDomain domain = build_price_domain(model, options.margin_cap);
    const SolverConfig cfg = options.solver.value_or(SolverConfig::defaults_for(domain));
    const double eps_obs =
        options.eps_obs > 0.0 ? options.eps_obs : 1e-6 * domain.diameter_hint();

    const VectorFieldSpec field = make_picard_flow(
        [model](const Point& p) -> Point { return model.costs + zeta(model, p); }, "blp-zeta");
    const Solver solver = solver_from(domain, field, cfg);
    const InitialSampler sampler = InitialSampler::uniform(options.seed);

    const std::vector<RestartRecord> records =
        run_restarts(solver, sampler, domain, options.n_restarts, options.seed, options.workers);

    EquilibriumResult result;
    result.tally = identify_outcomes(records, eps_obs);
    result.hn = check_hn(result.tally);

    if (result.tally.clusters.empty()) {
        result.all_dagger = true;
        return result;
    }

    for (const OutcomeCluster& cluster : result.tally.clusters) {
        const Point& rep = cluster.representative;
        // the cap must never constrain: stay >= 1% of the box width off the top face
        for (int j = 0; j < model.J; ++j) {
            const double width = domain.upper()[j] - domain.lower()[j];
            if (domain.upper()[j] - rep[j] < 0.01 * width)
                throw std::runtime_error(
                    "equilibrium_pipeline: terminal price within 1% of the price cap; "
                    "rerun with a larger margin_cap");
        }
        result.cluster_foc_residuals.push_back(foc_residual_inf(model, rep));
    }
    for (double residual : result.cluster_foc_residuals)
        if (!(residual <= options.foc_tol))
            throw std::runtime_error(
                "equilibrium_pipeline: terminal cluster violates the first-order conditions "
                "(residual " + std::to_string(residual) + ")");

    const OutcomeCluster* best = &result.tally.clusters.front();
    for (const OutcomeCluster& cluster : result.tally.clusters)
        if (cluster.count > best->count) best = &cluster;
    result.price = result.hn.holds ? *result.hn.rts : best->representative;
    const Shares s = shares(model, result.price);
    result.inside_shares = s.inside;
    result.outside_share = s.outside;
    result.foc_residual = foc_residual_inf(model, result.price);

    if (result.hn.holds) result.posteriors = compute_hn_posteriors(options.priors, result.tally.n);
    return result;
}

}  // namespace basin
