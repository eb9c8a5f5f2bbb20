"""Dynamic solvers from random restarts with Bayesian inference on basin
sizes and solution uniqueness.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from ._core import (
    ConfigError,
    Domain,
    Field,
    NotHnError,
    Outcome,
    Sampler,
    SolverConfig,
    basin_eta_bound,
    basin_tail_bound_beta,
    basin_tail_bound_poly,
    basin_tail_exact,
    beta_posterior_update,
    costs_from_log,
    dirichlet_coarsen_params,
    empirical_bayes_calibrate,
    equilibrium_pipeline,
    foc,
    gradient_flow,
    infer_from_tally,
    integrate,
    mfm_component_likelihood,
    mfm_k1_bounds,
    mfm_lk_bounds,
    mfm_partition_likelihood,
    mfm_posterior_k,
    moment_tail_bound,
    named_field,
    picard_flow,
    poly_tail_rate_bound,
    projected_residual,
    raw_field,
    shares,
    share_jacobian,
    slab_moment,
    solve_manifest,
    spike_slab_posterior,
    table1,
    table2,
    table3,
    table_csv,
    validate,
    zeta,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
