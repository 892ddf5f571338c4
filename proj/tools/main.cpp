// isodelay: stability bounds, DDE validation runs and network ensembles for
// delayed case isolation.

#include "commands.hpp"

#include "isodelay/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

using namespace isodelay;
using namespace isodelay::cli;

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kParse = 3,
    kNumerical = 4,
    kConsistency = 5,
    kIo = 6,
};

int fail(int code, const std::string& kind, const std::string& message) {
    std::string flat = message;
    for (char& c : flat) {
        if (c == '\n' || c == '"') {
            c = ' ';
        }
    }
    std::cerr << "error kind=" << kind << " message=\"" << flat << "\"\n";
    return code;
}

std::map<std::string, std::string> resolved_flags(const CLI::App& sub) {
    std::map<std::string, std::string> entries;
    entries["subcommand"] = sub.get_name();
    entries["version"] = ISODELAY_VERSION;
    for (const CLI::Option* opt : sub.get_options()) {
        std::string name = opt->get_name(false, true);
        if (name.empty() || name.find("help") != std::string::npos) {
            continue;
        }
        while (!name.empty() && name.front() == '-') {
            name.erase(0, 1);
        }
        std::string value;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) {
                value += (value.empty() ? "" : ",") + r;
            }
        } else {
            value = opt->get_default_str();
        }
        entries[name] = value;
    }
    return entries;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::ios_base::failure("cannot open '" + path + "' for writing");
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability of delayed case isolation in heterogeneous SIR populations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ISODELAY_VERSION);

    // bound
    auto* bound = app.add_subcommand("bound", "Sweep R0 or c_v and tabulate the maximal isolation delay");
    std::string bound_axis = "r0";
    std::string bound_range;
    std::vector<double> bound_alphas;
    BoundOptions bound_opts;
    std::string bound_out = "bound.csv";
    bound->add_option("--axis", bound_axis, "Sweep variable: r0 or cv")
        ->check(CLI::IsMember({"r0", "cv"}))
        ->capture_default_str();
    bound->add_option("--range", bound_range, "START:STOP:STEP (default 1:6:0.05 for r0, 0:1.5:0.01 for cv)");
    bound->add_option("--alpha", bound_alphas, "Isolated fractions (default 0.7,0.8,0.9,1.0)")->delimiter(',');
    bound->add_option("--gamma", bound_opts.gamma, "Recovery rate (1/day)")->capture_default_str();
    bound->add_option("--r0", bound_opts.r0, "Homogeneous-equivalent R0 for the cv axis")->capture_default_str();
    bound->add_option("--out", bound_out, "Output CSV")->capture_default_str();

    // classify
    auto* cls = app.add_subcommand("classify", "Classify one configuration");
    ClassifyOptions cls_opts;
    std::string cls_mode = "mixed";
    std::string cls_out = "classify.txt";
    cls->add_option("--gamma", cls_opts.gamma, "Recovery rate (1/day)")->capture_default_str();
    cls->add_option("--alpha", cls_opts.alpha, "Isolated fraction")->required();
    cls->add_option("--t-delay", cls_opts.t_delay, "Queried isolation delay (days)")->capture_default_str();
    cls->add_option("--r0", cls_opts.r0, "Homogeneous-equivalent R0 = rho*mu/gamma");
    cls->add_option("--rho", cls_opts.rho, "Per-contact transmission rate");
    cls->add_option("--mu", cls_opts.mu, "Mean degree");
    cls->add_option("--cv", cls_opts.cv, "Coefficient of variation of the degree")->capture_default_str();
    cls->add_option("--dist", cls_opts.dist_path, "Degree distribution file (k,count)");
    cls->add_option("--mode", cls_mode, "Heterogeneity factor: mixed or fixed-graph")
        ->check(CLI::IsMember({"mixed", "fixed-graph"}))
        ->capture_default_str();
    cls->add_option("--out", cls_out, "Output file (also echoed to stdout)")->capture_default_str();

    // dde
    auto* dde = app.add_subcommand("dde", "Integrate a delayed system and fit its growth rate");
    DdeOptions dde_opts;
    std::string dde_system = "homogeneous";
    std::string dde_history = "constant";
    std::string dde_susceptible = "frozen";
    std::string dde_seeding = "uniform";
    std::string dde_window;
    std::string dde_out = "trajectory.csv";
    dde->add_option("--system", dde_system, "homogeneous, partitioned or reduced")
        ->check(CLI::IsMember({"homogeneous", "partitioned", "reduced"}))
        ->capture_default_str();
    dde->add_option("--gamma", dde_opts.gamma, "Recovery rate (1/day)")->capture_default_str();
    dde->add_option("--alpha", dde_opts.alpha, "Isolated fraction")->capture_default_str();
    dde->add_option("--t-delay", dde_opts.t_delay, "Isolation delay (days)")->capture_default_str();
    dde->add_option("--dt", dde_opts.dt, "Step size (days)")->capture_default_str();
    dde->add_option("--t-end", dde_opts.t_end, "Horizon (days)")->capture_default_str();
    dde->add_option("--history", dde_history, "constant or exponential")
        ->check(CLI::IsMember({"constant", "exponential"}))
        ->capture_default_str();
    dde->add_option("--history-rate", dde_opts.history_rate, "Exponential history rate (default: dominant root)");
    dde->add_option("--beta", dde_opts.beta, "Mixing rate (homogeneous)");
    dde->add_option("--r0", dde_opts.r0, "R0; beta = R0*gamma (homogeneous)");
    dde->add_option("--rho", dde_opts.rho, "Per-contact transmission rate")->capture_default_str();
    dde->add_option("--mu", dde_opts.mu, "Mean degree (reduced)");
    dde->add_option("--cv", dde_opts.cv, "Coefficient of variation (reduced)")->capture_default_str();
    dde->add_option("--dist", dde_opts.dist_path, "Degree distribution file (k,count)");
    dde->add_option("--susceptible", dde_susceptible, "frozen or dynamic (partitioned)")
        ->check(CLI::IsMember({"frozen", "dynamic"}))
        ->capture_default_str();
    dde->add_option("--seeding", dde_seeding, "uniform or degree")
        ->check(CLI::IsMember({"uniform", "degree"}))
        ->capture_default_str();
    dde->add_option("--i0", dde_opts.i0, "Initial infectious proportion")->capture_default_str();
    dde->add_option("--window", dde_window, "Growth-fit window T0:T1 (default: skip transients)");
    dde->add_flag("--lemma1", dde_opts.lemma1, "Paired partitioned/reduced run with the same seeding");
    dde->add_option("--out", dde_out, "Trajectory CSV")->capture_default_str();

    // netsim
    auto* net = app.add_subcommand("netsim", "Monte Carlo SIR-with-isolation ensembles on random graphs");
    EnsembleConfig net_cfg;
    net_cfg.graph.node_count = 1000000;
    net_cfg.runs = 300;
    std::string net_graph = "config";
    std::string net_seeding = "uniform";
    double net_rho = 0.2;
    double net_gamma = 0.1;
    double net_alpha = 0.0;
    double net_delay = 0.0;
    std::optional<int> net_ba_m;
    bool desk_scale = false;
    std::string net_out = "netsim";
    std::string export_graph;
    net->add_option("--graph", net_graph, "config, ba or ws")
        ->check(CLI::IsMember({"config", "ba", "ws"}))
        ->capture_default_str();
    net->add_option("--nodes", net_cfg.graph.node_count, "Node count")->capture_default_str();
    net->add_option("--mean-degree", net_cfg.graph.mean_degree, "Requested mean degree")->capture_default_str();
    net->add_option("--rewire", net_cfg.graph.rewire, "Watts-Strogatz rewiring probability")->capture_default_str();
    net->add_option("--ba-m", net_ba_m, "Barabasi-Albert edges per new node (default round(mu/2))");
    net->add_option("--rho", net_rho, "Per-day transmission probability per edge")->capture_default_str();
    net->add_option("--gamma", net_gamma, "Recovery rate (1/day)")->capture_default_str();
    net->add_option("--alpha", net_alpha, "Isolated fraction")->capture_default_str();
    net->add_option("--t-delay", net_delay, "Isolation delay (days, rounded)")->capture_default_str();
    net->add_option("--seeding", net_seeding, "uniform or degree")
        ->check(CLI::IsMember({"uniform", "degree"}))
        ->capture_default_str();
    net->add_option("--initial", net_cfg.initial_infected, "Initially infectious nodes")->capture_default_str();
    net->add_option("--runs", net_cfg.runs, "Simulations")->capture_default_str();
    net->add_option("--days", net_cfg.days, "Recorded days (day 1 = seeding)")->capture_default_str();
    net->add_option("--base-seed", net_cfg.base_seed, "Base RNG seed")->capture_default_str();
    net->add_option("--threads", net_cfg.threads, "Worker threads (results do not depend on it)")
        ->capture_default_str();
    net->add_flag("--reuse-graph", net_cfg.reuse_graph, "Share one graph realization across runs");
    net->add_flag("--desk-scale", desk_scale, "Shrink to 1e5 nodes x 100 runs");
    net->add_option("--out", net_out, "Output prefix for _runs.csv and _summary.csv")->capture_default_str();
    net->add_option("--export-graph", export_graph, "Write the first run's graph as an edge list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kUsage, "usage", e.what());
    }

    try {
        if (bound->parsed()) {
            bound_opts.axis = bound_axis == "cv" ? BoundAxis::CV : BoundAxis::R0;
            if (!bound_range.empty()) {
                bound_opts.range = parse_range(bound_range);
            } else if (bound_opts.axis == BoundAxis::CV) {
                bound_opts.range = {0.0, 1.5, 0.01};
            }
            if (!bound_alphas.empty()) {
                bound_opts.alphas = bound_alphas;
            }
            const auto rows = bound_table(bound_opts);
            auto out = open_output(bound_out);
            write_bound_csv(out, rows);
            write_metadata(bound_out + ".meta", resolved_flags(*bound));
        } else if (cls->parsed()) {
            cls_opts.mode = heterogeneity_mode_from_string(cls_mode);
            const auto result = classify(cls_opts);
            write_classification(std::cout, result);
            auto out = open_output(cls_out);
            write_classification(out, result);
            write_metadata(cls_out + ".meta", resolved_flags(*cls));
        } else if (dde->parsed()) {
            dde_opts.system = dde_system == "partitioned" ? DdeSystemKind::Partitioned
                              : dde_system == "reduced"   ? DdeSystemKind::Reduced
                                                          : DdeSystemKind::Homogeneous;
            dde_opts.history = dde_history == "exponential" ? HistoryKind::Exponential : HistoryKind::Constant;
            dde_opts.susceptible = dde_susceptible == "dynamic" ? SusceptibleMode::Dynamic : SusceptibleMode::Frozen;
            dde_opts.seeding = seeding_mode_from_string(dde_seeding);
            if (!dde_window.empty()) {
                dde_opts.window = parse_window(dde_window);
            }
            const auto result = run_dde(dde_opts);
            auto out = open_output(dde_out);
            result.trajectory.write_csv(out);
            write_dde_summary(std::cout, result);
            write_metadata(dde_out + ".meta", resolved_flags(*dde));
        } else if (net->parsed()) {
            if (desk_scale) {
                net_cfg.graph.node_count = 100000;
                net_cfg.runs = 100;
            }
            net_cfg.graph.kind = graph_kind_from_string(net_graph);
            net_cfg.graph.attachments = net_ba_m;
            net_cfg.params = EpidemicParams(net_rho, net_gamma, net_alpha, net_delay);
            net_cfg.seeding = seeding_mode_from_string(net_seeding);
            const auto stats = run_netsim(net_cfg);
            {
                auto runs_out = open_output(net_out + "_runs.csv");
                stats.write_runs_csv(runs_out);
                auto summary_out = open_output(net_out + "_summary.csv");
                stats.write_summary_csv(summary_out);
            }
            if (!export_graph.empty()) {
                auto graph_out = open_output(export_graph);
                generate_graph(net_cfg.graph, stats.runs.front().graph_seed).write_edge_list(graph_out);
            }
            write_netsim_summary(std::cout, stats);
            auto meta = resolved_flags(*net);
            meta["resolved_nodes"] = std::to_string(net_cfg.graph.node_count);
            meta["resolved_runs"] = std::to_string(net_cfg.runs);
            write_metadata(net_out + ".meta", meta);
        }
    } catch (const UsageError& e) {
        return fail(kUsage, "usage", e.what());
    } catch (const ParseError& e) {
        return fail(kParse, "parse", e.what());
    } catch (const DomainError& e) {
        return fail(kUsage, "domain", e.what());
    } catch (const NumericalError& e) {
        return fail(kNumerical, "numerical", e.what());
    } catch (const IntegrationError& e) {
        return fail(kNumerical, "integration", e.what());
    } catch (const ConsistencyError& e) {
        return fail(kConsistency, "consistency", e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(kIo, "io", e.what());
    } catch (const std::exception& e) {
        return fail(kIo, "internal", e.what());
    }
    return kOk;
}
