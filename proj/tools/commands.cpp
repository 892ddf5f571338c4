#include "commands.hpp"

#include "isodelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace isodelay::cli {

namespace {

double parse_double(const std::string& text, const std::string& context) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("malformed number '" + text + "' in " + context);
    }
    if (used != text.size() || !std::isfinite(value)) {
        throw UsageError("malformed number '" + text + "' in " + context);
    }
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    std::istringstream in(text);
    while (std::getline(in, current, sep)) {
        parts.push_back(current);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

}  // namespace

std::vector<double> Range::values() const {
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    out.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        out.push_back(start + static_cast<double>(i) * step);
    }
    return out;
}

Range parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw UsageError("range '" + text + "' must be START:STOP:STEP");
    }
    Range range{parse_double(parts[0], "range"), parse_double(parts[1], "range"), parse_double(parts[2], "range")};
    if (!(range.step > 0.0)) {
        throw UsageError("range step must be positive");
    }
    if (range.stop < range.start) {
        throw UsageError("range stop must not be below start");
    }
    if ((range.stop - range.start) / range.step > 1e7) {
        throw UsageError("range has too many points");
    }
    return range;
}

std::pair<double, double> parse_window(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) {
        throw UsageError("window '" + text + "' must be T0:T1");
    }
    const double t0 = parse_double(parts[0], "window");
    const double t1 = parse_double(parts[1], "window");
    if (!(t1 > t0)) {
        throw UsageError("window end must exceed start");
    }
    return {t0, t1};
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

std::vector<BoundRow> bound_table(const BoundOptions& options) {
    if (!(options.gamma > 0.0)) {
        throw UsageError("--gamma must be positive");
    }
    if (options.alphas.empty()) {
        throw UsageError("at least one --alpha is required");
    }
    std::vector<double> xs = options.range.values();
    if (options.axis == BoundAxis::CV) {
        for (double marker : kCvMarkers) {
            const bool present = std::any_of(xs.begin(), xs.end(),
                                             [&](double x) { return std::abs(x - marker) < 1e-12; });
            if (!present) {
                xs.push_back(marker);
            }
        }
        std::sort(xs.begin(), xs.end());
    }

    std::vector<BoundRow> rows;
    for (double alpha : options.alphas) {
        if (!(alpha >= 0.0 && alpha <= 1.0)) {
            throw UsageError("--alpha values must lie in [0, 1]");
        }
        const EpidemicParams params(0.0, options.gamma, alpha, 0.0);
        for (double x : xs) {
            double beta_h = 0.0;
            if (options.axis == BoundAxis::R0) {
                if (!(x > 0.0)) {
                    throw UsageError("R0 values must be positive");
                }
                beta_h = x * options.gamma;
            } else {
                if (!(x >= 0.0)) {
                    throw UsageError("c_v values must be non-negative");
                }
                beta_h = options.r0 * options.gamma * (x * x + 1.0);
            }
            const StabilityVerdict verdict = classify_delay(beta_h, params);
            BoundRow row;
            row.x = x;
            row.alpha = alpha;
            row.verdict = verdict.kind;
            switch (verdict.kind) {
                case VerdictKind::StableUpTo: row.t_max_days = *verdict.t_max; break;
                case VerdictKind::InfeasibleAtZeroDelay: row.t_max_days = verdict.signed_bound; break;
                case VerdictKind::UnconditionallyStable:
                    row.t_max_days = std::numeric_limits<double>::infinity();
                    break;
            }
            if (verdict.kind == VerdictKind::StableUpTo) {
                // The boundary must put the rightmost root on the imaginary axis.
                const auto root =
                    rightmost_root(characteristic_params(beta_h, params.with_delay(row.t_max_days)));
                if (std::abs(root.real()) > 1e-7) {
                    std::ostringstream msg;
                    msg << "boundary root off axis at x=" << x << " alpha=" << alpha << ": Re=" << root.real();
                    throw ConsistencyError(msg.str());
                }
            }
            rows.push_back(row);
        }
    }
    return rows;
}

void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
    const auto old_precision = out.precision(17);
    out << "x,alpha,T_max_days,verdict\n";
    for (const auto& row : rows) {
        out << row.x << ',' << row.alpha << ',';
        if (std::isinf(row.t_max_days)) {
            out << (row.t_max_days > 0 ? "inf" : "-inf");
        } else {
            out << row.t_max_days;
        }
        out << ',' << to_string(row.verdict) << '\n';
    }
    out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

ClassifyResult classify(const ClassifyOptions& options) {
    const int routes = (options.r0 ? 1 : 0) + (options.dist_path ? 1 : 0) + (options.mu ? 1 : 0);
    if (routes != 1) {
        throw UsageError("classify needs exactly one of --r0, --mu or --dist");
    }
    ClassifyResult result;
    if (options.r0) {
        if (!(*options.r0 > 0.0)) {
            throw UsageError("--r0 must be positive");
        }
        const EpidemicParams params(0.0, options.gamma, options.alpha, options.t_delay);
        const double h = heterogeneity_factor(1.0, options.cv, HeterogeneityMode::MixedPopulation);
        result.beta_h = *options.r0 * options.gamma * h;
        result.verdict = options.cv == 0.0 ? homogeneous_delay_bound(params, *options.r0)
                                           : classify_delay(result.beta_h, params);
        result.numbers = reproduction_numbers(result.beta_h, params);
        return result;
    }
    if (!options.rho) {
        throw UsageError("--rho is required with --mu or --dist");
    }
    const EpidemicParams params(*options.rho, options.gamma, options.alpha, options.t_delay);
    const DegreeStats stats = options.dist_path
                                  ? compute_stats(DegreeDistribution::load(*options.dist_path), options.mode)
                                  : DegreeStats::from_moments(*options.mu, options.cv * *options.mu, options.mode);
    result.stats = stats;
    result.beta_h = effective_beta(params, stats);
    result.verdict = heterogeneous_delay_bound(params, stats);
    result.numbers = reproduction_numbers(result.beta_h, params);
    return result;
}

void write_classification(std::ostream& out, const ClassifyResult& result) {
    const auto old_precision = out.precision(10);
    const StabilityVerdict& v = result.verdict;
    out << "verdict:        " << to_string(v.kind);
    if (v.t_max) {
        out << " (T_delay < " << *v.t_max << " days)";
    }
    out << '\n';
    if (result.stats) {
        out << "degree stats:   mu=" << result.stats->mu << " sigma=" << result.stats->sigma
            << " c_v=" << result.stats->cv << " h=" << result.stats->h << '\n';
    }
    out << "mixing rate:    beta*h=" << result.beta_h << " /day\n";
    out << "reproduction:   R0=" << result.numbers.r0 << " Re=" << result.numbers.re << '\n';
    out << "rightmost root: " << v.rightmost_root.real() << (v.rightmost_root.imag() < 0 ? " - " : " + ")
        << std::abs(v.rightmost_root.imag()) << "i /day (recovery root " << v.recovery_root << ")\n";
    out << "stable at the queried delay: " << (v.stable ? "yes" : "no") << '\n';
    out.precision(17);
    out << "RESULT verdict=" << to_string(v.kind) << " t_max=";
    if (v.t_max) {
        out << *v.t_max;
    } else {
        out << "none";
    }
    out << " root_re=" << v.rightmost_root.real() << " root_im=" << v.rightmost_root.imag()
        << " margin=" << v.margin << " stable=" << (v.stable ? 1 : 0) << " beta_h=" << result.beta_h
        << " r0=" << result.numbers.r0 << " re=" << result.numbers.re << '\n';
    out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// dde
// ---------------------------------------------------------------------------

namespace {

std::map<int, double> seeding_profile(const DegreeDistribution& dist, SeedingMode mode, double i0) {
    std::map<int, double> weights;
    double total = 0.0;
    for (const auto& [k, n] : dist.counts()) {
        if (k == 0) {
            continue;
        }
        const double w = static_cast<double>(n) * (mode == SeedingMode::DegreeProportional ? k : 1.0);
        weights[k] = w;
        total += w;
    }
    const double infected = i0 * static_cast<double>(dist.population());
    for (auto& [k, w] : weights) {
        w = infected * w / total;
    }
    return weights;
}

HistoryFn make_history(const DdeOptions& options, State initial, double default_rate, std::size_t scaled_components) {
    if (options.history == HistoryKind::Constant) {
        return constant_history(std::move(initial));
    }
    const double rate = options.history_rate.value_or(default_rate);
    if (options.system == DdeSystemKind::Homogeneous) {
        const double i0 = initial[1];
        return [i0, rate](double t) {
            const double i = i0 * std::exp(rate * t);
            return State{1.0 - i, i, 0.0};
        };
    }
    return [initial = std::move(initial), rate, scaled_components](double t) {
        State out = initial;
        const double factor = std::exp(rate * t);
        for (std::size_t c = 0; c < scaled_components; ++c) {
            out[c] *= factor;
        }
        // Dynamic susceptibles follow X_k = N_k - Y_k.
        for (std::size_t c = scaled_components; c < out.size(); ++c) {
            out[c] = initial[c] + initial[c - scaled_components] * (1.0 - factor);
        }
        return out;
    };
}

double dominant_rate(double beta_h, const EpidemicParams& params) {
    return rightmost_root(characteristic_params(beta_h, params)).real();
}

Trajectory with_aggregate(const Trajectory& traj, const PartitionedSystem& system) {
    auto names = traj.component_names();
    names.push_back("I");
    Trajectory out(names, names.size());
    const std::size_t m = system.degrees().size();
    std::vector<double> y(names.size());
    std::vector<double> dy(names.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto s = traj.state(i);
        const auto d = traj.derivative(i);
        std::copy(s.begin(), s.end(), y.begin());
        std::copy(d.begin(), d.end(), dy.begin());
        y.back() = system.aggregate_infectious(s);
        double dsum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            dsum += d[j];
        }
        dy.back() = dsum / static_cast<double>(system.distribution().population());
        out.append(traj.times()[i], y, dy);
    }
    return out;
}

}  // namespace

DdeResult run_dde(const DdeOptions& options) {
    const IntegrationOptions integration{options.dt};
    std::optional<DegreeDistribution> dist;
    if (options.dist_path) {
        dist.emplace(DegreeDistribution::load(*options.dist_path));
    }
    const EpidemicParams params(options.rho, options.gamma, options.alpha, options.t_delay);
    const auto resolve_window = [&](double t_end) {
        if (options.window) {
            return *options.window;
        }
        const double start = transient_cutoff(params);
        if (!(start < t_end)) {
            throw UsageError("default growth window starts after --t-end; pass --window");
        }
        return std::pair{start, t_end};
    };

    if (options.lemma1) {
        if (!dist) {
            throw UsageError("--lemma1 needs --dist");
        }
        const auto profile = seeding_profile(*dist, options.seeding, options.i0);
        const PartitionedSystem partitioned(*dist, params, SusceptibleMode::Frozen);
        const ReducedSystem reduced(compute_stats(*dist), params);
        const auto consistent = consistent_reduced_history(*dist, options.rho, profile);
        const Trajectory tp = integrate(partitioned, constant_history(partitioned.initial_state(profile)),
                                        options.t_end, integration);
        const Trajectory tr = integrate(reduced, constant_history(consistent.state()), options.t_end, integration);

        Trajectory paired({"I_partitioned", "I_reduced"}, 2);
        double max_gap = 0.0;
        for (std::size_t i = 0; i < tp.size(); ++i) {
            const double ip = partitioned.aggregate_infectious(tp.state(i));
            const double ir = tr.state(i)[0];
            max_gap = std::max(max_gap, std::abs(ip - ir) / std::abs(ir));
            const double zero[2] = {0.0, 0.0};
            const double y[2] = {ip, ir};
            paired.append(tp.times()[i], y, zero);
        }
        DdeResult result{paired, "I_reduced", {}, 0.0, 0.0, max_gap};
        const auto [t0, t1] = resolve_window(options.t_end);
        result.window_start = t0;
        result.window_end = t1;
        result.fit = estimate_growth_rate(paired, 1, t0, t1);
        if (max_gap > 1e-6) {
            std::ostringstream msg;
            msg << "partitioned and reduced aggregate I differ by " << max_gap << " (relative)";
            throw ConsistencyError(msg.str());
        }
        return result;
    }

    switch (options.system) {
        case DdeSystemKind::Homogeneous: {
            double beta = 0.0;
            if (options.beta) {
                beta = *options.beta;
            } else if (options.r0) {
                beta = *options.r0 * options.gamma;
            } else {
                throw UsageError("homogeneous system needs --beta or --r0");
            }
            const HomogeneousSystem system(beta, params);
            const Trajectory traj =
                integrate(system, make_history(options, HomogeneousSystem::initial_state(options.i0),
                                               dominant_rate(beta, params), 3),
                          options.t_end, integration);
            for (std::size_t i = 0; i < traj.size(); ++i) {
                const auto y = traj.state(i);
                if (std::abs(y[0] + y[1] + y[2] - 1.0) > 1e-9) {
                    throw ConsistencyError("S + I + R drifted from 1 at t=" + std::to_string(traj.times()[i]));
                }
            }
            const auto [t0, t1] = resolve_window(options.t_end);
            return {traj, "I", estimate_growth_rate(traj, 1, t0, t1), t0, t1, std::nullopt};
        }
        case DdeSystemKind::Partitioned: {
            if (!dist) {
                throw UsageError("partitioned system needs --dist");
            }
            const PartitionedSystem system(*dist, params, options.susceptible);
            const auto profile = seeding_profile(*dist, options.seeding, options.i0);
            const double rate = dominant_rate(effective_beta(params, compute_stats(*dist)), params);
            const Trajectory raw = integrate(
                system, make_history(options, system.initial_state(profile), rate, system.degrees().size()),
                options.t_end, integration);
            Trajectory traj = with_aggregate(raw, system);
            const auto [t0, t1] = resolve_window(options.t_end);
            const auto fit = estimate_growth_rate(traj, traj.dimension() - 1, t0, t1);
            return {std::move(traj), "I", fit, t0, t1, std::nullopt};
        }
        case DdeSystemKind::Reduced: {
            DegreeStats stats;
            State initial;
            if (dist) {
                stats = compute_stats(*dist);
                initial = consistent_reduced_history(*dist, options.rho, seeding_profile(*dist, options.seeding, options.i0))
                              .state();
            } else if (options.mu) {
                stats = DegreeStats::from_moments(*options.mu, options.cv * *options.mu);
                const double boost =
                    options.seeding == SeedingMode::DegreeProportional ? stats.k2 / (stats.mu * stats.mu) : 1.0;
                initial = {options.i0, options.rho * options.i0 * boost};
            } else {
                throw UsageError("reduced system needs --dist or --mu");
            }
            const ReducedSystem system(stats, params);
            const Trajectory traj =
                integrate(system, make_history(options, initial, dominant_rate(system.beta_h(), params), 2),
                          options.t_end, integration);
            const auto [t0, t1] = resolve_window(options.t_end);
            return {traj, "lambda", estimate_growth_rate(traj, 1, t0, t1), t0, t1, std::nullopt};
        }
    }
    throw UsageError("unknown system");
}

void write_dde_summary(std::ostream& out, const DdeResult& result) {
    const auto old_precision = out.precision(17);
    out << "RESULT observable=" << result.observable << " growth_rate=" << result.fit.rate
        << " residual_rms=" << result.fit.residual_rms << " window=" << result.window_start << ':'
        << result.window_end << " samples=" << result.fit.samples;
    if (result.max_relative_gap) {
        out << " max_rel_gap=" << *result.max_relative_gap;
    }
    out << '\n';
    out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// netsim
// ---------------------------------------------------------------------------

NetworkEnsembleStats run_netsim(const EnsembleConfig& config) {
    NetworkEnsembleStats stats = run_ensemble(config);
    const std::size_t nodes = config.graph.node_count;
    for (const auto& run : stats.runs) {
        std::size_t previous_removed = 0;
        for (const auto& m : run.days) {
            if (m.susceptible + m.infectious + m.removed + m.isolated != nodes) {
                throw ConsistencyError("population not conserved in run " + std::to_string(run.run) + " day " +
                                       std::to_string(m.day));
            }
            if (m.removed < previous_removed) {
                throw ConsistencyError("removed count decreased in run " + std::to_string(run.run));
            }
            previous_removed = m.removed;
        }
    }
    return stats;
}

void write_netsim_summary(std::ostream& out, const NetworkEnsembleStats& stats) {
    const auto old_precision = out.precision(6);
    out << "runs=" << stats.run_count() << " nodes=" << stats.config.graph.node_count
        << " graph=" << to_string(stats.config.graph.kind) << " seeding=" << to_string(stats.config.seeding) << '\n';
    out << "measured mu=" << stats.mean_graph_degree
        << " effective contacts mu+sigma^2/mu=" << stats.mean_effective_contacts << '\n';
    out << "day  mean_inf_degree  stderr  mean_I\n";
    for (const auto& d : stats.days) {
        out << d.day << "  " << d.mean_inf_degree << "  " << d.stderr_inf_degree() << "  " << d.mean_infectious
            << '\n';
    }
    out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// metadata
// ---------------------------------------------------------------------------

void write_metadata(const std::string& path, const std::map<std::string, std::string>& entries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write metadata file '" + path + "'");
    }
    for (const auto& [key, value] : entries) {
        out << key << '=' << value << '\n';
    }
}

}  // namespace isodelay::cli
