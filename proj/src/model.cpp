#include "isodelay/model.hpp"

#include "isodelay/errors.hpp"
#include "summation.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

namespace isodelay {

EpidemicParams::EpidemicParams(double rho, double gamma, double alpha, double t_delay)
    : rho_(rho), gamma_(gamma), alpha_(alpha), t_delay_(t_delay) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw DomainError("rho must lie in [0, 1], got " + std::to_string(rho));
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError("gamma must be positive, got " + std::to_string(gamma));
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    if (!(t_delay >= 0.0) || !std::isfinite(t_delay)) {
        throw DomainError("t_delay must be non-negative, got " + std::to_string(t_delay));
    }
}

std::string to_string(HeterogeneityMode mode) {
    switch (mode) {
        case HeterogeneityMode::MixedPopulation: return "mixed";
        case HeterogeneityMode::FixedGraph: return "fixed-graph";
    }
    return "unknown";
}

HeterogeneityMode heterogeneity_mode_from_string(const std::string& name) {
    if (name == "mixed") {
        return HeterogeneityMode::MixedPopulation;
    }
    if (name == "fixed-graph") {
        return HeterogeneityMode::FixedGraph;
    }
    throw DomainError("unknown heterogeneity mode '" + name + "' (expected mixed or fixed-graph)");
}

// ---------------------------------------------------------------------------
// DegreeDistribution
// ---------------------------------------------------------------------------

DegreeDistribution::DegreeDistribution(std::map<int, std::uint64_t> counts) {
    bool transmits = false;
    for (const auto& [k, n] : counts) {
        if (k < 0) {
            throw DomainError("degree must be non-negative, got " + std::to_string(k));
        }
        if (n == 0) {
            continue;
        }
        counts_.emplace(k, n);
        population_ += n;
        transmits = transmits || k >= 1;
    }
    if (population_ == 0) {
        throw DomainError("degree distribution is empty");
    }
    if (!transmits) {
        throw DomainError("degree distribution has no partition with k >= 1");
    }
}

DegreeDistribution DegreeDistribution::degenerate(int k, std::uint64_t population) {
    return DegreeDistribution({{k, population}});
}

std::uint64_t DegreeDistribution::count(int k) const {
    const auto it = counts_.find(k);
    return it == counts_.end() ? 0 : it->second;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename T>
T parse_integer(std::string_view field, const char* what, std::size_t line) {
    field = trim(field);
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(std::string("invalid ") + what + " '" + std::string(field) + "'", line);
    }
    return value;
}

}  // namespace

DegreeDistribution DegreeDistribution::parse(std::istream& in) {
    std::string raw;
    std::size_t line = 0;
    bool seen_header = false;
    std::map<int, std::uint64_t> counts;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = trim(raw);
        if (line == 1 && text.starts_with("\xEF\xBB\xBF")) {
            text.remove_prefix(3);
        }
        if (!seen_header) {
            if (text != "k,count") {
                throw ParseError("expected header 'k,count'", line);
            }
            seen_header = true;
            continue;
        }
        if (text.empty()) {
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError("expected two comma-separated fields", line);
        }
        const int k = parse_integer<int>(text.substr(0, comma), "degree", line);
        const auto n = parse_integer<std::uint64_t>(text.substr(comma + 1), "count", line);
        if (k < 0) {
            throw ParseError("negative degree", line);
        }
        if (!counts.emplace(k, n).second) {
            throw ParseError("duplicate degree " + std::to_string(k), line);
        }
    }
    if (!seen_header) {
        throw ParseError("missing header 'k,count'", line + 1);
    }
    try {
        return DegreeDistribution(std::move(counts));
    } catch (const DomainError& e) {
        throw ParseError(e.what(), line);
    }
}

DegreeDistribution DegreeDistribution::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open distribution file '" + path + "'", 0);
    }
    return parse(in);
}

void DegreeDistribution::write(std::ostream& out) const {
    out << "k,count\n";
    for (const auto& [k, n] : counts_) {
        out << k << ',' << n << '\n';
    }
}

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

double heterogeneity_factor(double mu, double sigma, HeterogeneityMode mode) {
    if (!(mu > 0.0)) {
        throw DomainError("mean degree must be positive");
    }
    switch (mode) {
        case HeterogeneityMode::MixedPopulation: {
            const double cv = sigma / mu;
            return cv * cv + 1.0;
        }
        case HeterogeneityMode::FixedGraph:
            return (mu + sigma * sigma / mu - 1.0) / mu;
    }
    return 1.0;
}

DegreeStats DegreeStats::from_moments(double mu, double sigma, HeterogeneityMode mode) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw DomainError("mean degree must be positive");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw DomainError("degree standard deviation must be non-negative");
    }
    DegreeStats stats;
    stats.mu = mu;
    stats.sigma = sigma;
    stats.cv = sigma / mu;
    stats.k2 = sigma * sigma + mu * mu;
    stats.k3 = std::numeric_limits<double>::quiet_NaN();
    stats.h = heterogeneity_factor(mu, sigma, mode);
    stats.mode = mode;
    return stats;
}

DegreeStats compute_stats(const DegreeDistribution& dist, HeterogeneityMode mode) {
    if (dist.population() == 0) {
        throw DomainError("degree distribution is empty");
    }
    const auto total = static_cast<double>(dist.population());

    detail::CompensatedSum s1;
    detail::CompensatedSum s2;
    detail::CompensatedSum s3;
    for (const auto& [k, n] : dist.counts()) {
        const auto kd = static_cast<double>(k);
        const auto nd = static_cast<double>(n);
        s1.add(kd * nd);
        s2.add(kd * kd * nd);
        s3.add(kd * kd * kd * nd);
    }
    const double mu = s1.value() / total;

    // Central second moment in a second pass; k2 - mu^2 cancels badly.
    detail::CompensatedSum central;
    for (const auto& [k, n] : dist.counts()) {
        const double d = static_cast<double>(k) - mu;
        central.add(d * d * static_cast<double>(n));
    }

    DegreeStats stats;
    stats.mu = mu;
    stats.sigma = std::sqrt(central.value() / total);
    stats.cv = stats.sigma / mu;
    stats.k2 = s2.value() / total;
    stats.k3 = s3.value() / total;
    stats.h = heterogeneity_factor(mu, stats.sigma, mode);
    stats.mode = mode;
    return stats;
}

double effective_beta(const EpidemicParams& params, const DegreeStats& stats) {
    return params.rho() * stats.mu * stats.h;
}

ReproductionNumbers reproduction_numbers(double beta, const EpidemicParams& params) {
    const double r0 = beta / params.gamma();
    const double re = r0 * (1.0 - params.alpha() * std::exp(-params.gamma() * params.t_delay()));
    return {r0, re};
}

}  // namespace isodelay
