#include "isodelay/dde.hpp"

#include "isodelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace isodelay {

// ---------------------------------------------------------------------------
// Systems
// ---------------------------------------------------------------------------

HomogeneousSystem::HomogeneousSystem(double beta, EpidemicParams params) : beta_(beta), params_(params) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be finite and non-negative");
    }
}

void HomogeneousSystem::rhs(double /*t*/, std::span<const double> y, std::span<const double> y_delayed,
                            std::span<double> dydt) const {
    const double gamma = params_.gamma();
    const double isolated = params_.alpha() * std::exp(-gamma * params_.t_delay()) * y_delayed[1];
    const double incidence = beta_ * y[0] * (y[1] - isolated);
    dydt[0] = -incidence;
    dydt[1] = incidence - gamma * y[1];
    dydt[2] = gamma * y[1];
}

State HomogeneousSystem::initial_state(double i0) {
    if (!(i0 >= 0.0 && i0 <= 1.0)) {
        throw DomainError("initial infectious proportion must lie in [0, 1]");
    }
    return {1.0 - i0, i0, 0.0};
}

PartitionedSystem::PartitionedSystem(DegreeDistribution dist, EpidemicParams params, SusceptibleMode mode)
    : PartitionedSystem(std::move(dist), params, mode, [alpha = params.alpha()](int) { return alpha; }) {}

PartitionedSystem::PartitionedSystem(DegreeDistribution dist, EpidemicParams params, SusceptibleMode mode,
                                     const std::function<double(int)>& alpha_of_degree)
    : dist_(std::move(dist)), params_(params), mode_(mode) {
    for (const auto& [k, n] : dist_.counts()) {
        if (k == 0) {
            continue;  // inert partition
        }
        const double alpha_k = alpha_of_degree(k);
        if (!(alpha_k >= 0.0 && alpha_k <= 1.0)) {
            throw DomainError("alpha for degree " + std::to_string(k) + " outside [0, 1]");
        }
        degrees_.push_back(k);
        partition_sizes_.push_back(static_cast<double>(n));
        alpha_.push_back(alpha_k);
        contact_total_ += static_cast<double>(k) * static_cast<double>(n);
    }
}

std::size_t PartitionedSystem::dimension() const {
    return mode_ == SusceptibleMode::Frozen ? degrees_.size() : 2 * degrees_.size();
}

std::vector<std::string> PartitionedSystem::component_names() const {
    std::vector<std::string> names;
    for (int k : degrees_) {
        names.push_back("Y_" + std::to_string(k));
    }
    if (mode_ == SusceptibleMode::Dynamic) {
        for (int k : degrees_) {
            names.push_back("X_" + std::to_string(k));
        }
    }
    return names;
}

void PartitionedSystem::rhs(double /*t*/, std::span<const double> y, std::span<const double> y_delayed,
                            std::span<double> dydt) const {
    const std::size_t m = degrees_.size();
    const double survival = std::exp(-params_.gamma() * params_.t_delay());
    double weighted = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double transmitting = y[j] - alpha_[j] * survival * y_delayed[j];
        weighted += static_cast<double>(degrees_[j]) * transmitting;
    }
    const double xi = params_.rho() * weighted / contact_total_;
    for (std::size_t j = 0; j < m; ++j) {
        const double susceptible = mode_ == SusceptibleMode::Frozen ? partition_sizes_[j] : y[m + j];
        const double infections = static_cast<double>(degrees_[j]) * susceptible * xi;
        dydt[j] = infections - params_.gamma() * y[j];
        if (mode_ == SusceptibleMode::Dynamic) {
            dydt[m + j] = -infections;
        }
    }
}

State PartitionedSystem::initial_state(const std::map<int, double>& y0_profile) const {
    const std::size_t m = degrees_.size();
    State state(dimension(), 0.0);
    for (const auto& [k, y0] : y0_profile) {
        if (!(y0 >= 0.0) || !std::isfinite(y0)) {
            throw DomainError("seeding must be finite and non-negative");
        }
        const auto it = std::find(degrees_.begin(), degrees_.end(), k);
        if (it == degrees_.end()) {
            if (y0 == 0.0) {
                continue;
            }
            throw DomainError("seeding on degree " + std::to_string(k) + " which has no partition");
        }
        state[static_cast<std::size_t>(it - degrees_.begin())] = y0;
    }
    if (mode_ == SusceptibleMode::Dynamic) {
        for (std::size_t j = 0; j < m; ++j) {
            state[m + j] = partition_sizes_[j] - state[j];
        }
    }
    return state;
}

double PartitionedSystem::aggregate_infectious(std::span<const double> y) const {
    double total = 0.0;
    for (std::size_t j = 0; j < degrees_.size(); ++j) {
        total += y[j];
    }
    return total / static_cast<double>(dist_.population());
}

ReducedSystem::ReducedSystem(const DegreeStats& stats, EpidemicParams params)
    : mu_(stats.mu), beta_h_(effective_beta(params, stats)), params_(params) {}

void ReducedSystem::rhs(double /*t*/, std::span<const double> y, std::span<const double> y_delayed,
                        std::span<double> dydt) const {
    const double gamma = params_.gamma();
    const double isolated = params_.alpha() * std::exp(-gamma * params_.t_delay()) * y_delayed[1];
    const double xi = y[1] - isolated;
    dydt[0] = mu_ * xi - gamma * y[0];
    dydt[1] = beta_h_ * xi - gamma * y[1];
}

// ---------------------------------------------------------------------------
// Histories
// ---------------------------------------------------------------------------

HistoryFn constant_history(State state) {
    return [state = std::move(state)](double) { return state; };
}

HistoryFn exponential_history(State state, double rate) {
    return [state = std::move(state), rate](double t) {
        State out = state;
        const double factor = std::exp(rate * t);
        for (double& v : out) {
            v *= factor;
        }
        return out;
    };
}

ReducedInitialState consistent_reduced_history(const DegreeDistribution& dist, double rho,
                                               const std::map<int, double>& y0_profile) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw DomainError("rho must lie in [0, 1]");
    }
    double infectious = 0.0;
    double weighted = 0.0;
    double contact_total = 0.0;
    for (const auto& [k, n] : dist.counts()) {
        contact_total += static_cast<double>(k) * static_cast<double>(n);
    }
    for (const auto& [k, y0] : y0_profile) {
        if (!(y0 >= 0.0) || !std::isfinite(y0)) {
            throw DomainError("seeding must be finite and non-negative");
        }
        if (y0 > 0.0 && (k <= 0 || dist.count(k) == 0)) {
            throw DomainError("seeding on degree " + std::to_string(k) + " which has no transmitting partition");
        }
        infectious += y0;
        weighted += static_cast<double>(k) * y0;
    }
    if (!(infectious > 0.0)) {
        throw DomainError("seeding profile is all zero");
    }
    return {infectious / static_cast<double>(dist.population()), rho * weighted / contact_total};
}

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

Trajectory::Trajectory(std::vector<std::string> names, std::size_t dimension)
    : names_(std::move(names)), dimension_(dimension) {
    if (names_.size() != dimension_) {
        throw DomainError("trajectory: component name count does not match dimension");
    }
}

void Trajectory::append(double t, std::span<const double> y, std::span<const double> dydt) {
    if (y.size() != dimension_ || dydt.size() != dimension_) {
        throw DomainError("trajectory: sample has wrong dimension");
    }
    if (!times_.empty() && !(t > times_.back())) {
        throw DomainError("trajectory: sample times must be strictly increasing");
    }
    times_.push_back(t);
    states_.insert(states_.end(), y.begin(), y.end());
    derivs_.insert(derivs_.end(), dydt.begin(), dydt.end());
}

std::size_t Trajectory::component_index(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        throw DomainError("trajectory has no component '" + name + "'");
    }
    return static_cast<std::size_t>(it - names_.begin());
}

std::span<const double> Trajectory::state(std::size_t i) const {
    return {states_.data() + i * dimension_, dimension_};
}

std::span<const double> Trajectory::derivative(std::size_t i) const {
    return {derivs_.data() + i * dimension_, dimension_};
}

std::vector<double> Trajectory::series(std::size_t component) const {
    if (component >= dimension_) {
        throw DomainError("trajectory component index out of range");
    }
    std::vector<double> out(times_.size());
    for (std::size_t i = 0; i < times_.size(); ++i) {
        out[i] = states_[i * dimension_ + component];
    }
    return out;
}

State Trajectory::interpolate(double t) const {
    State out(dimension_);
    interpolate_into(t, out);
    return out;
}

void Trajectory::interpolate_into(double t, std::span<double> out) const {
    if (times_.empty()) {
        throw DomainError("trajectory is empty");
    }
    const double front = times_.front();
    const double back = times_.back();
    const double slack = 1e-12 * std::max(1.0, std::abs(back));
    if (t < front - slack || t > back + slack) {
        std::ostringstream msg;
        msg << "trajectory: t=" << t << " outside [" << front << ", " << back << "]";
        throw DomainError(msg.str());
    }
    t = std::clamp(t, front, back);

    auto upper = std::upper_bound(times_.begin(), times_.end(), t);
    const auto hi = static_cast<std::size_t>(upper - times_.begin());
    if (hi == 0 || times_[hi - 1] == t) {
        const auto y = state(hi == 0 ? 0 : hi - 1);
        std::copy(y.begin(), y.end(), out.begin());
        return;
    }
    const std::size_t lo = hi - 1;
    const double h = times_[hi] - times_[lo];
    const double theta = (t - times_[lo]) / h;
    const double one_minus = 1.0 - theta;
    const double h00 = (1.0 + 2.0 * theta) * one_minus * one_minus;
    const double h10 = theta * one_minus * one_minus;
    const double h01 = theta * theta * (3.0 - 2.0 * theta);
    const double h11 = theta * theta * (theta - 1.0);
    const auto y0 = state(lo);
    const auto y1 = state(hi);
    const auto m0 = derivative(lo);
    const auto m1 = derivative(hi);
    for (std::size_t c = 0; c < dimension_; ++c) {
        out[c] = h00 * y0[c] + h10 * h * m0[c] + h01 * y1[c] + h11 * h * m1[c];
    }
}

void Trajectory::write_csv(std::ostream& out) const {
    const auto old_precision = out.precision(17);
    out << 't';
    for (const auto& name : names_) {
        out << ',' << name;
    }
    out << '\n';
    for (std::size_t i = 0; i < times_.size(); ++i) {
        out << times_[i];
        for (double v : state(i)) {
            out << ',' << v;
        }
        out << '\n';
    }
    out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

namespace {

void check_magnitude(std::span<const double> y, double cap, double t_last) {
    for (double v : y) {
        if (!std::isfinite(v) || std::abs(v) > cap) {
            std::ostringstream msg;
            msg << "state magnitude exceeded cap " << cap << " after t=" << t_last;
            throw IntegrationError(msg.str(), t_last);
        }
    }
}

}  // namespace

Trajectory integrate(const DelaySystem& system, const HistoryFn& history, double t_end,
                     const IntegrationOptions& options) {
    const std::size_t dim = system.dimension();
    const double tau = system.delay();
    if (!(options.dt > 0.0) || !std::isfinite(options.dt)) {
        throw DomainError("dt must be positive");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw DomainError("t_end must be positive");
    }
    if (!(tau >= 0.0)) {
        throw DomainError("delay must be non-negative");
    }
    if (options.output_stride == 0) {
        throw DomainError("output_stride must be at least 1");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / options.dt - 1e-9));
    const double h = t_end / static_cast<double>(steps);
    if (tau > 0.0 && h > tau / 4.0) {
        throw DomainError("dt must not exceed T_delay / 4 for history resolution");
    }

    State y = history(0.0);
    if (y.size() != dim) {
        throw DomainError("history returns a state of the wrong dimension");
    }
    check_magnitude(y, options.magnitude_cap, 0.0);

    Trajectory full(system.component_names(), dim);
    State delayed(dim);
    auto fill_delayed = [&](double t, std::span<const double> current) {
        if (tau == 0.0) {
            std::copy(current.begin(), current.end(), delayed.begin());
            return;
        }
        const double lagged = t - tau;
        if (lagged <= 0.0) {
            const State past = history(lagged);
            if (past.size() != dim) {
                throw DomainError("history returns a state of the wrong dimension");
            }
            std::copy(past.begin(), past.end(), delayed.begin());
        } else {
            full.interpolate_into(lagged, delayed);
        }
    };

    State k1(dim);
    State k2(dim);
    State k3(dim);
    State k4(dim);
    State stage(dim);
    auto eval = [&](double t, std::span<const double> at, std::span<double> out) {
        fill_delayed(t, at);
        system.rhs(t, at, delayed, out);
    };

    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * h;
        eval(t, y, k1);
        full.append(t, y, k1);

        for (std::size_t c = 0; c < dim; ++c) {
            stage[c] = y[c] + 0.5 * h * k1[c];
        }
        eval(t + 0.5 * h, stage, k2);
        for (std::size_t c = 0; c < dim; ++c) {
            stage[c] = y[c] + 0.5 * h * k2[c];
        }
        eval(t + 0.5 * h, stage, k3);
        for (std::size_t c = 0; c < dim; ++c) {
            stage[c] = y[c] + h * k3[c];
        }
        eval(t + h, stage, k4);
        for (std::size_t c = 0; c < dim; ++c) {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        check_magnitude(y, options.magnitude_cap, t);
    }
    eval(t_end, y, k1);
    full.append(t_end, y, k1);

    if (options.output_stride == 1) {
        return full;
    }
    Trajectory thinned(system.component_names(), dim);
    for (std::size_t i = 0; i < full.size(); i += options.output_stride) {
        thinned.append(full.times()[i], full.state(i), full.derivative(i));
    }
    if ((full.size() - 1) % options.output_stride != 0) {
        thinned.append(full.times().back(), full.state(full.size() - 1), full.derivative(full.size() - 1));
    }
    return thinned;
}

// ---------------------------------------------------------------------------
// Growth rate
// ---------------------------------------------------------------------------

GrowthFit estimate_growth_rate(std::span<const double> times, std::span<const double> values, double t0,
                               double t1) {
    if (times.size() != values.size()) {
        throw DomainError("growth fit: times and values differ in length");
    }
    if (!(t1 > t0)) {
        throw DomainError("growth fit: empty window");
    }
    std::vector<double> ts;
    std::vector<double> logs;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t0 || times[i] > t1) {
            continue;
        }
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            std::ostringstream msg;
            msg << "growth fit: non-positive sample " << values[i] << " at t=" << times[i];
            throw DomainError(msg.str());
        }
        ts.push_back(times[i]);
        logs.push_back(std::log(values[i]));
    }
    if (ts.size() < 2) {
        throw DomainError("growth fit: fewer than two samples in window");
    }
    const auto n = static_cast<double>(ts.size());
    double t_mean = 0.0;
    double l_mean = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        t_mean += ts[i];
        l_mean += logs[i];
    }
    t_mean /= n;
    l_mean /= n;
    double stt = 0.0;
    double stl = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - t_mean) * (ts[i] - t_mean);
        stl += (ts[i] - t_mean) * (logs[i] - l_mean);
    }
    GrowthFit fit;
    fit.rate = stl / stt;
    fit.intercept = l_mean - fit.rate * t_mean;
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = logs[i] - (fit.intercept + fit.rate * ts[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    fit.samples = ts.size();
    return fit;
}

GrowthFit estimate_growth_rate(const Trajectory& traj, std::size_t component, double t0, double t1) {
    const auto values = traj.series(component);
    return estimate_growth_rate(traj.times(), values, t0, t1);
}

double transient_cutoff(const EpidemicParams& params) {
    return 5.0 * std::max(params.infectious_period(), params.t_delay());
}

}  // namespace isodelay
