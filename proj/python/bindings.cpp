#include "isodelay/dde.hpp"
#include "isodelay/errors.hpp"
#include "isodelay/graph.hpp"
#include "isodelay/lambert_w.hpp"
#include "isodelay/model.hpp"
#include "isodelay/netsim.hpp"
#include "isodelay/stability.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace isodelay;

namespace {

// Trajectories cross the boundary as {"t": [...], name: [...], ...}.
py::dict to_dict(const Trajectory& traj) {
    py::dict out;
    out["t"] = traj.times();
    for (std::size_t c = 0; c < traj.dimension(); ++c) {
        out[py::str(traj.component_names()[c])] = traj.series(c);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_isodelay, m) {
    m.doc() = "Stability bounds, delayed SIR integration and network ensembles";
    m.attr("__version__") = ISODELAY_VERSION;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

    py::class_<EpidemicParams>(m, "EpidemicParams")
        .def(py::init<double, double, double, double>(), py::arg("rho"), py::arg("gamma"), py::arg("alpha") = 0.0,
             py::arg("t_delay") = 0.0)
        .def_property_readonly("rho", &EpidemicParams::rho)
        .def_property_readonly("gamma", &EpidemicParams::gamma)
        .def_property_readonly("alpha", &EpidemicParams::alpha)
        .def_property_readonly("t_delay", &EpidemicParams::t_delay)
        .def("with_alpha", &EpidemicParams::with_alpha)
        .def("with_delay", &EpidemicParams::with_delay)
        .def("__repr__", [](const EpidemicParams& p) {
            return "EpidemicParams(rho=" + std::to_string(p.rho()) + ", gamma=" + std::to_string(p.gamma()) +
                   ", alpha=" + std::to_string(p.alpha()) + ", t_delay=" + std::to_string(p.t_delay()) + ")";
        });

    py::enum_<HeterogeneityMode>(m, "HeterogeneityMode")
        .value("MIXED", HeterogeneityMode::MixedPopulation)
        .value("FIXED_GRAPH", HeterogeneityMode::FixedGraph);

    py::class_<DegreeDistribution>(m, "DegreeDistribution")
        .def(py::init<std::map<int, std::uint64_t>>(), py::arg("counts"))
        .def_static("load", &DegreeDistribution::load)
        .def_static("degenerate", &DegreeDistribution::degenerate)
        .def_property_readonly("counts", &DegreeDistribution::counts)
        .def_property_readonly("population", &DegreeDistribution::population)
        .def_property_readonly("max_degree", &DegreeDistribution::max_degree);

    py::class_<DegreeStats>(m, "DegreeStats")
        .def_static("from_moments", &DegreeStats::from_moments, py::arg("mu"), py::arg("sigma"),
                    py::arg("mode") = HeterogeneityMode::MixedPopulation)
        .def_readonly("mu", &DegreeStats::mu)
        .def_readonly("sigma", &DegreeStats::sigma)
        .def_readonly("cv", &DegreeStats::cv)
        .def_readonly("k2", &DegreeStats::k2)
        .def_readonly("k3", &DegreeStats::k3)
        .def_readonly("h", &DegreeStats::h)
        .def_property_readonly("effective_contacts", &DegreeStats::effective_contacts);

    m.def("compute_stats", &compute_stats, py::arg("dist"), py::arg("mode") = HeterogeneityMode::MixedPopulation);
    m.def("effective_beta", &effective_beta);
    m.def("reproduction_numbers", [](double beta, const EpidemicParams& p) {
        const auto rn = reproduction_numbers(beta, p);
        return py::make_tuple(rn.r0, rn.re);
    });

    py::enum_<VerdictKind>(m, "VerdictKind")
        .value("UNCONDITIONALLY_STABLE", VerdictKind::UnconditionallyStable)
        .value("STABLE_UP_TO", VerdictKind::StableUpTo)
        .value("INFEASIBLE_AT_ZERO_DELAY", VerdictKind::InfeasibleAtZeroDelay);

    py::class_<StabilityVerdict>(m, "StabilityVerdict")
        .def_readonly("kind", &StabilityVerdict::kind)
        .def_readonly("t_max", &StabilityVerdict::t_max)
        .def_readonly("signed_bound", &StabilityVerdict::signed_bound)
        .def_readonly("rightmost_root", &StabilityVerdict::rightmost_root)
        .def_readonly("margin", &StabilityVerdict::margin)
        .def_readonly("stable", &StabilityVerdict::stable)
        .def("__repr__", [](const StabilityVerdict& v) { return "StabilityVerdict(" + to_string(v.kind) + ")"; });

    m.def("homogeneous_delay_bound", &homogeneous_delay_bound, py::arg("params"), py::arg("r0"));
    m.def("heterogeneous_delay_bound", &heterogeneous_delay_bound, py::arg("params"), py::arg("stats"));
    m.def("classify_delay", &classify_delay, py::arg("beta_h"), py::arg("params"));
    m.def("max_cv", &max_cv, py::arg("r0"), py::arg("alpha"));
    m.def(
        "rightmost_root",
        [](double a, double b, double tau) { return rightmost_root({a, b, tau}); },
        py::arg("a"), py::arg("b"), py::arg("tau"));
    m.def("degree_proportional_alpha", &degree_proportional_alpha, py::arg("alpha"), py::arg("stats"),
          py::arg("max_degree"));
    m.def(
        "lambert_w",
        [](double x, int branch) {
            if (branch != 0 && branch != -1) {
                throw DomainError("branch must be 0 or -1");
            }
            return lambert_w(branch == 0 ? LambertBranch::Principal : LambertBranch::MinusOne, x);
        },
        py::arg("x"), py::arg("branch") = 0);

    m.def(
        "integrate_homogeneous",
        [](double beta, const EpidemicParams& p, double i0, double t_end, double dt) {
            return to_dict(integrate(HomogeneousSystem(beta, p), constant_history(HomogeneousSystem::initial_state(i0)),
                                     t_end, {dt}));
        },
        py::arg("beta"), py::arg("params"), py::arg("i0") = 1e-5, py::arg("t_end") = 100.0, py::arg("dt") = 0.01);
    m.def(
        "integrate_reduced",
        [](const DegreeStats& stats, const EpidemicParams& p, double i0, double lambda0, double t_end, double dt) {
            return to_dict(integrate(ReducedSystem(stats, p), constant_history({i0, lambda0}), t_end, {dt}));
        },
        py::arg("stats"), py::arg("params"), py::arg("i0") = 1e-5, py::arg("lambda0") = 1e-5,
        py::arg("t_end") = 100.0, py::arg("dt") = 0.01);
    m.def(
        "estimate_growth_rate",
        [](const std::vector<double>& t, const std::vector<double>& v, double t0, double t1) {
            return estimate_growth_rate(t, v, t0, t1).rate;
        },
        py::arg("t"), py::arg("values"), py::arg("t0"), py::arg("t1"));

    m.def(
        "generate_graph_stats",
        [](const std::string& kind, std::size_t nodes, double mean_degree, std::uint64_t seed) {
            GraphSpec spec;
            spec.kind = graph_kind_from_string(kind);
            spec.node_count = nodes;
            spec.mean_degree = mean_degree;
            const auto g = generate_graph(spec, seed);
            return py::make_tuple(g.mean_degree(), g.degree_variance(), g.edge_count());
        },
        py::arg("kind") = "config", py::arg("nodes") = 100000, py::arg("mean_degree") = 4.0, py::arg("seed") = 1);

    m.def(
        "run_ensemble",
        [](const std::string& graph, std::size_t nodes, const EpidemicParams& p, const std::string& seeding,
           std::size_t runs, int days, std::uint64_t seed, unsigned threads) {
            EnsembleConfig config;
            config.graph.kind = graph_kind_from_string(graph);
            config.graph.node_count = nodes;
            config.params = p;
            config.seeding = seeding_mode_from_string(seeding);
            config.runs = runs;
            config.days = days;
            config.base_seed = seed;
            config.threads = threads;
            NetworkEnsembleStats stats;
            {
                py::gil_scoped_release release;
                stats = run_ensemble(config);
            }
            py::list rows;
            for (const auto& d : stats.days) {
                py::dict row;
                row["day"] = d.day;
                row["mean_S"] = d.mean_susceptible;
                row["mean_I"] = d.mean_infectious;
                row["mean_R"] = d.mean_removed;
                row["mean_isolated"] = d.mean_isolated;
                row["mean_inf_degree"] = d.mean_inf_degree;
                row["stderr_inf_degree"] = d.stderr_inf_degree();
                rows.append(row);
            }
            return py::make_tuple(rows, stats.mean_graph_degree, stats.mean_effective_contacts);
        },
        py::arg("graph") = "config", py::arg("nodes") = 10000, py::arg("params") = EpidemicParams(0.2, 0.1, 0.0, 0.0),
        py::arg("seeding") = "uniform", py::arg("runs") = 10, py::arg("days") = 30, py::arg("seed") = 1,
        py::arg("threads") = 1);
}
