#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "basin/pipeline.hpp"
#include "basin/problems.hpp"
#include "basin/tables.hpp"
#include "basin/validate.hpp"

namespace py = pybind11;
using namespace basin;

namespace {

json to_nljson(const py::handle& obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        json j = json::object();
        for (const auto& item : obj.cast<py::dict>())
            j[py::str(item.first).cast<std::string>()] = to_nljson(item.second);
        return j;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        json j = json::array();
        for (const auto& item : obj.cast<py::sequence>()) j.push_back(to_nljson(item));
        return j;
    }
    throw py::type_error("cannot convert python object to JSON");
}

py::object from_nljson(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<long long>());
        case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const json& item : j) out.append(from_nljson(item));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::str(key)] = from_nljson(value);
            return out;
        }
        default: return py::none();
    }
}

struct FieldHandle {
    VectorFieldSpec spec;
    int dim = 0;  // 0 = any
};

MfmPrior mfm_prior_from(const std::string& family, double theta, double alpha, int k_max) {
    MfmPrior prior;
    if (family == "geometric") prior.family = PkFamily::Geometric;
    else if (family == "zt-poisson") prior.family = PkFamily::ZeroTruncatedPoisson;
    else throw std::invalid_argument("family must be 'geometric' or 'zt-poisson'");
    prior.theta = theta;
    prior.alpha = alpha;
    prior.k_max = k_max;
    prior.validate();
    return prior;
}

PkFamily family_from(const std::string& name) {
    if (name == "geometric") return PkFamily::Geometric;
    if (name == "zt-poisson") return PkFamily::ZeroTruncatedPoisson;
    throw std::invalid_argument("family must be 'geometric' or 'zt-poisson'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dynamic solvers from random restarts with Bayesian inference on basin sizes";

    py::class_<ConvexDomain>(m, "Domain")
        .def_static("box", &ConvexDomain::box, py::arg("lower"), py::arg("upper"))
        .def_static("ball", &ConvexDomain::ball, py::arg("center"), py::arg("radius"))
        .def_static("all", &ConvexDomain::all, py::arg("dim"))
        .def_property_readonly("dim", &ConvexDomain::dim)
        .def_property_readonly("diameter_hint", &ConvexDomain::diameter_hint)
        .def("contains", &ConvexDomain::contains, py::arg("x"))
        .def("project", &ConvexDomain::project, py::arg("x"))
        .def("tangent_cone_project", &ConvexDomain::tangent_cone_project, py::arg("x"), py::arg("v"))
        .def("boundary_normal", &ConvexDomain::boundary_normal, py::arg("x"))
        .def("to_dict", [](const ConvexDomain& d) { return from_nljson(to_json(d)); });

    py::class_<InitialSampler>(m, "Sampler")
        .def_static("uniform", &InitialSampler::uniform, py::arg("seed"))
        .def_static("uniform_on_box", &InitialSampler::uniform_on_box, py::arg("lower"),
                    py::arg("upper"), py::arg("seed"))
        .def("sample", &InitialSampler::sample, py::arg("domain"), py::arg("index"));

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_static("defaults_for", &SolverConfig::defaults_for, py::arg("domain"))
        .def_readwrite("h", &SolverConfig::h)
        .def_readwrite("residual_tol", &SolverConfig::residual_tol)
        .def_readwrite("stall_window", &SolverConfig::stall_window)
        .def_readwrite("max_steps", &SolverConfig::max_steps)
        .def_readwrite("blowup_norm", &SolverConfig::blowup_norm);

    py::class_<TerminalOutcome>(m, "Outcome")
        .def_property_readonly("converged", [](const TerminalOutcome& o) { return o.converged; })
        .def_property_readonly("point",
                               [](const TerminalOutcome& o) -> py::object {
                                   if (!o.converged) return py::none();
                                   return py::cast(o.point);
                               })
        .def_property_readonly("residual", [](const TerminalOutcome& o) { return o.residual; })
        .def_property_readonly("steps", [](const TerminalOutcome& o) { return o.steps; })
        .def_property_readonly("reason", [](const TerminalOutcome& o) -> py::object {
            if (o.converged) return py::none();
            switch (o.reason) {
                case DaggerReason::MaxSteps: return py::str("max-steps");
                case DaggerReason::Blowup: return py::str("blowup");
                case DaggerReason::NonFinite: return py::str("non-finite");
            }
            return py::none();
        });

    py::class_<FieldHandle>(m, "Field");

    m.def("gradient_flow", [](std::function<Vector(const Point&)> grad) {
        return FieldHandle{make_gradient_flow(std::move(grad), "python-gradient"), 0};
    });
    m.def("picard_flow", [](std::function<Point(const Point&)> map_f) {
        return FieldHandle{make_picard_flow(std::move(map_f), "python-picard"), 0};
    });
    m.def("raw_field", [](std::function<Vector(const Point&)> eval) {
        return FieldHandle{make_raw_field(std::move(eval), "python-raw"), 0};
    });
    m.def("named_field", [](const py::dict& spec) {
        const ProblemField problem = make_named_field(to_nljson(spec));
        return FieldHandle{problem.field, problem.dim};
    });

    // single-trajectory run; python callbacks are fine here (single thread)
    m.def(
        "integrate",
        [](const ConvexDomain& domain, const FieldHandle& field, const Point& x0,
           const SolverConfig& cfg) { return integrate(domain, field.spec, x0, cfg); },
        py::arg("domain"), py::arg("field"), py::arg("x0"), py::arg("config"));
    m.def(
        "projected_residual",
        [](const ConvexDomain& domain, const FieldHandle& field, const Point& x) {
            return projected_residual(domain, field.spec, x);
        },
        py::arg("domain"), py::arg("field"), py::arg("x"));

    // full manifest runs stay in C++ (worker threads never touch python)
    m.def(
        "solve_manifest",
        [](const py::dict& manifest, int workers) {
            const RunManifest parsed = manifest_from_json(to_nljson(manifest));
            json result;
            {
                py::gil_scoped_release release;
                result = solve_manifest(parsed, workers).result;
            }
            return from_nljson(result);
        },
        py::arg("manifest"), py::arg("workers") = 0);
    m.def(
        "infer_from_tally",
        [](const py::dict& tally, const py::dict& priors, bool force) {
            return from_nljson(infer_from_tally(tally_from_json(to_nljson(tally)),
                                                priors_from_json(to_nljson(priors)), force));
        },
        py::arg("tally"), py::arg("priors") = py::dict(), py::arg("force") = false);

    // posteriors and bounds conditioned on H_n
    m.def(
        "beta_posterior_update",
        [](double alpha, double beta, long n) {
            const BetaParams post = beta_posterior_update({alpha, beta}, n);
            return py::make_tuple(post.alpha, post.beta);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("n"));
    m.def(
        "basin_tail_exact",
        [](double alpha, double beta, long n, double eps) {
            return basin_tail_exact({alpha, beta}, n, eps);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("n"), py::arg("eps"));
    m.def(
        "basin_tail_bound_beta",
        [](double alpha, double beta, long n, double eps) {
            return basin_tail_bound_beta({alpha, beta}, n, eps);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("n"), py::arg("eps"));
    m.def(
        "basin_eta_bound",
        [](long n, double eps, double eta, double prior_mass_a_eps, double prior_mass_a_eta) {
            const ClampedBound b = basin_eta_bound(n, eps, eta, prior_mass_a_eps, prior_mass_a_eta);
            return py::make_tuple(b.value, b.raw);
        },
        py::arg("n"), py::arg("eps"), py::arg("eta"), py::arg("prior_mass_a_eps"),
        py::arg("prior_mass_a_eta"));
    m.def(
        "basin_tail_bound_poly",
        [](double c, double kappa, double delta, long n, double eps, double prior_mass) {
            const PolyBound b = basin_tail_bound_poly({c, kappa, delta}, n, eps, prior_mass);
            py::dict out;
            out["poly"] = b.poly.value;
            out["poly_raw"] = b.poly.raw;
            out["exponential"] = b.exponential.value;
            out["exponential_raw"] = b.exponential.raw;
            return out;
        },
        py::arg("c"), py::arg("kappa"), py::arg("delta"), py::arg("n"), py::arg("eps"),
        py::arg("prior_mass_a_eps"));
    m.def(
        "slab_moment",
        [](double alpha, double beta, long n) { return slab_moment({alpha, beta}, n); },
        py::arg("alpha"), py::arg("beta"), py::arg("n"));
    m.def(
        "spike_slab_posterior",
        [](double p, double slab_alpha, double slab_beta, long n) {
            return spike_slab_posterior({p, {slab_alpha, slab_beta}}, n).exact_value;
        },
        py::arg("p"), py::arg("slab_alpha"), py::arg("slab_beta"), py::arg("n"));
    m.def("moment_tail_bound", &moment_tail_bound, py::arg("tail_f"), py::arg("delta"), py::arg("n"));
    m.def("poly_tail_rate_bound", &poly_tail_rate_bound, py::arg("C"), py::arg("gamma"),
          py::arg("delta"), py::arg("n"));
    m.def("mfm_component_likelihood", &mfm_component_likelihood, py::arg("alpha"), py::arg("k"),
          py::arg("n"));
    m.def(
        "mfm_lk_bounds",
        [](double alpha, int k, long n) {
            const Interval b = mfm_Lk_bounds(alpha, k, n);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("alpha"), py::arg("k"), py::arg("n"));
    m.def(
        "mfm_posterior_k",
        [](const std::string& family, double theta, double alpha, int k_max, long n) {
            const MfmPosterior posterior = mfm_posterior_K(mfm_prior_from(family, theta, alpha, k_max), n);
            py::dict out;
            out["mass"] = posterior.mass;
            out["k1"] = posterior.k1();
            out["truncation_tail_bound"] = posterior.truncation_tail_bound;
            return out;
        },
        py::arg("family"), py::arg("theta"), py::arg("alpha"), py::arg("k_max"), py::arg("n"));
    m.def(
        "mfm_k1_bounds",
        [](double pi1, double pi2, double alpha, long n) {
            const Interval b = mfm_K1_bounds(pi1, pi2, alpha, n);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("pi1"), py::arg("pi2"), py::arg("alpha"), py::arg("n"));
    m.def(
        "dirichlet_coarsen_params",
        [](double alpha, int big_k, int m_split) {
            const CoarsenParams params = dirichlet_coarsen_params(alpha, big_k, m_split);
            return py::make_tuple(params.fine, params.coarse);
        },
        py::arg("alpha"), py::arg("K"), py::arg("m"));
    m.def("mfm_partition_likelihood", &mfm_partition_likelihood, py::arg("alpha"), py::arg("k"),
          py::arg("counts"));
    m.def(
        "empirical_bayes_calibrate",
        [](const std::vector<std::vector<long>>& counts, const std::string& family,
           const std::vector<double>& theta_grid, const std::vector<double>& alpha_grid, int k_max) {
            CalibrationResult fit;
            {
                py::gil_scoped_release release;
                fit = empirical_bayes_calibrate(counts, family_from(family), theta_grid, alpha_grid,
                                                k_max);
            }
            py::dict out;
            out["theta_hat"] = fit.theta_hat;
            out["alpha_hat"] = fit.alpha_hat;
            out["loglik"] = fit.loglik;
            out["max_truncation_tail"] = fit.max_truncation_tail;
            return out;
        },
        py::arg("counts_per_instance"), py::arg("family"), py::arg("theta_grid"),
        py::arg("alpha_grid"), py::arg("k_max") = 200);

    // mixed-logit application
    m.def(
        "shares",
        [](const py::dict& model, const Point& p) {
            const Shares s = shares(model_from_json(to_nljson(model)), p);
            return py::make_tuple(s.inside, s.outside);
        },
        py::arg("model"), py::arg("p"));
    m.def(
        "share_jacobian",
        [](const py::dict& model, const Point& p) {
            return share_jacobian(model_from_json(to_nljson(model)), p);
        },
        py::arg("model"), py::arg("p"));
    m.def(
        "zeta",
        [](const py::dict& model, const Point& p) { return zeta(model_from_json(to_nljson(model)), p); },
        py::arg("model"), py::arg("p"));
    m.def(
        "foc",
        [](const py::dict& model, const Point& p) { return foc(model_from_json(to_nljson(model)), p); },
        py::arg("model"), py::arg("p"));
    m.def(
        "costs_from_log", &costs_from_log, py::arg("log_costs"));
    m.def(
        "equilibrium_pipeline",
        [](const py::dict& model, long n_restarts, std::uint64_t seed, double margin_cap,
           double eps_obs, int workers) {
            const MixedLogitModel parsed = model_from_json(to_nljson(model));
            EquilibriumOptions options;
            options.n_restarts = n_restarts;
            options.seed = seed;
            options.margin_cap = margin_cap;
            options.eps_obs = eps_obs;
            options.workers = workers;
            json result;
            {
                py::gil_scoped_release release;
                result = to_json(equilibrium_pipeline(parsed, options));
            }
            return from_nljson(result);
        },
        py::arg("model"), py::arg("n_restarts") = 100, py::arg("seed") = 0,
        py::arg("margin_cap") = 50.0, py::arg("eps_obs") = 0.0, py::arg("workers") = 0);

    // tables and validation
    m.def("table1", [] { return from_nljson(table_json(make_table1())); });
    m.def("table2", [] { return from_nljson(table_json(make_table2())); });
    m.def("table3", [] { return from_nljson(table_json(make_table3())); });
    m.def("table_csv", [](const std::string& which) {
        if (which == "table1") return table_csv(make_table1());
        if (which == "table2") return table_csv(make_table2());
        if (which == "table3") return table_csv(make_table3());
        throw std::invalid_argument("which must be table1, table2, or table3");
    });
    m.def(
        "validate",
        [](std::uint64_t seed) {
            json report;
            {
                py::gil_scoped_release release;
                report = to_json(run_validation(seed));
            }
            return from_nljson(report);
        },
        py::arg("seed") = 0);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NotHnError>(m, "NotHnError", PyExc_RuntimeError);
}
