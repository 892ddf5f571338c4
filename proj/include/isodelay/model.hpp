#pragma once

// Epidemiological parameters, contact-degree distributions and their moments.
//
// Assumptions shared by every model in this library: closed population,
// linearization about the all-susceptible state (early epidemic), no flow
// from removed back to susceptible.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>

namespace isodelay {

/// Transmission, recovery and isolation parameters (rho, gamma, alpha, T_delay).
///
/// rho is the per-contact transmission rate, gamma the recovery rate (1/day),
/// alpha the fraction of cases that get isolated and t_delay the time from
/// infection to isolation (days). Validated on construction; immutable.
class EpidemicParams {
public:
    EpidemicParams(double rho, double gamma, double alpha, double t_delay);

    [[nodiscard]] double rho() const noexcept { return rho_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double t_delay() const noexcept { return t_delay_; }

    /// Mean infectious period 1/gamma.
    [[nodiscard]] double infectious_period() const noexcept { return 1.0 / gamma_; }

    [[nodiscard]] EpidemicParams with_rho(double rho) const { return {rho, gamma_, alpha_, t_delay_}; }
    [[nodiscard]] EpidemicParams with_alpha(double alpha) const { return {rho_, gamma_, alpha, t_delay_}; }
    [[nodiscard]] EpidemicParams with_delay(double t_delay) const { return {rho_, gamma_, alpha_, t_delay}; }

    friend bool operator==(const EpidemicParams&, const EpidemicParams&) = default;

private:
    double rho_;
    double gamma_;
    double alpha_;
    double t_delay_;
};

enum class HeterogeneityMode {
    MixedPopulation,  ///< h = c_v^2 + 1
    FixedGraph,       ///< h = (mu + sigma^2/mu - 1) / mu, excludes the infector
};

[[nodiscard]] std::string to_string(HeterogeneityMode mode);
[[nodiscard]] HeterogeneityMode heterogeneity_mode_from_string(const std::string& name);

/// Partition sizes N_k over integer contact degrees k.
///
/// Counts are kept as exact integers. Degree-0 partitions are allowed; they
/// count toward the population but never transmit.
class DegreeDistribution {
public:
    explicit DegreeDistribution(std::map<int, std::uint64_t> counts);

    /// Reads the `k,count` text format (header required, LF or CRLF).
    /// Throws ParseError naming the offending line.
    static DegreeDistribution parse(std::istream& in);
    static DegreeDistribution load(const std::string& path);

    /// Every node has degree k.
    static DegreeDistribution degenerate(int k, std::uint64_t population);

    [[nodiscard]] const std::map<int, std::uint64_t>& counts() const noexcept { return counts_; }
    [[nodiscard]] std::uint64_t count(int k) const;
    [[nodiscard]] int max_degree() const noexcept { return counts_.rbegin()->first; }
    [[nodiscard]] std::uint64_t population() const noexcept { return population_; }

    void write(std::ostream& out) const;

private:
    std::map<int, std::uint64_t> counts_;
    std::uint64_t population_ = 0;
};

/// Moments of a degree distribution plus the heterogeneity factor h.
struct DegreeStats {
    double mu = 0.0;     ///< mean degree
    double sigma = 0.0;  ///< standard deviation
    double cv = 0.0;     ///< sigma / mu
    double k2 = 0.0;     ///< second raw moment <k^2> = sigma^2 + mu^2
    double k3 = 0.0;     ///< third raw moment <k^3>; NaN when built from (mu, sigma) only
    double h = 1.0;
    HeterogeneityMode mode = HeterogeneityMode::MixedPopulation;

    /// Stats for a population described only by mean and standard deviation.
    static DegreeStats from_moments(double mu, double sigma,
                                    HeterogeneityMode mode = HeterogeneityMode::MixedPopulation);

    /// Effective number of contacts of a randomly reached contact, mu*h.
    [[nodiscard]] double effective_contacts() const noexcept { return mu * h; }
};

[[nodiscard]] double heterogeneity_factor(double mu, double sigma, HeterogeneityMode mode);

[[nodiscard]] DegreeStats compute_stats(const DegreeDistribution& dist,
                                        HeterogeneityMode mode = HeterogeneityMode::MixedPopulation);

/// Mixing rate beta = rho * mu * h seen by the equivalent homogeneous model.
[[nodiscard]] double effective_beta(const EpidemicParams& params, const DegreeStats& stats);

struct ReproductionNumbers {
    double r0;  ///< beta / gamma
    double re;  ///< r0 * (1 - alpha * exp(-gamma * T_delay))
};

[[nodiscard]] ReproductionNumbers reproduction_numbers(double beta, const EpidemicParams& params);

}  // namespace isodelay
