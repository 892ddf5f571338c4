#pragma once

// Subcommand logic behind the `isodelay` executable. Kept free of argument
// parsing so the acceptance suite can call it directly.

#include "isodelay/dde.hpp"
#include "isodelay/model.hpp"
#include "isodelay/netsim.hpp"
#include "isodelay/stability.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isodelay::cli {

/// Bad flags or flag combinations (exit code 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal self-check failed after outputs were computed (exit code 5).
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Range {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    [[nodiscard]] std::vector<double> values() const;
};

/// Parses `START:STOP:STEP`.
[[nodiscard]] Range parse_range(const std::string& text);
/// Parses `T0:T1`.
[[nodiscard]] std::pair<double, double> parse_window(const std::string& text);

// --- bound ---------------------------------------------------------------

enum class BoundAxis { R0, CV };

struct BoundOptions {
    BoundAxis axis = BoundAxis::R0;
    Range range{1.0, 6.0, 0.05};
    std::vector<double> alphas{0.7, 0.8, 0.9, 1.0};
    double gamma = 0.1;
    double r0 = 3.0;  ///< homogeneous-equivalent R0 for the c_v axis
};

struct BoundRow {
    double x = 0.0;
    double alpha = 0.0;
    /// t_max for StableUpTo, signed formula value when infeasible, +inf when unconditional.
    double t_max_days = 0.0;
    VerdictKind verdict = VerdictKind::UnconditionallyStable;
};

/// c_v values always present in c_v sweeps (empirical bounds on contact networks).
inline constexpr double kCvMarkers[] = {0.37, 0.67};

[[nodiscard]] std::vector<BoundRow> bound_table(const BoundOptions& options);
void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows);

// --- classify ------------------------------------------------------------

struct ClassifyOptions {
    double gamma = 0.1;
    double alpha = 0.0;
    double t_delay = 0.0;
    std::optional<double> r0;  ///< homogeneous-equivalent rho*mu/gamma
    std::optional<double> rho;
    std::optional<double> mu;
    double cv = 0.0;
    std::optional<std::string> dist_path;
    HeterogeneityMode mode = HeterogeneityMode::MixedPopulation;
};

struct ClassifyResult {
    StabilityVerdict verdict;
    double beta_h = 0.0;
    ReproductionNumbers numbers{};
    std::optional<DegreeStats> stats;
};

[[nodiscard]] ClassifyResult classify(const ClassifyOptions& options);
/// Human-readable block followed by one `RESULT key=value ...` line.
void write_classification(std::ostream& out, const ClassifyResult& result);

// --- dde -----------------------------------------------------------------

enum class DdeSystemKind { Homogeneous, Partitioned, Reduced };
enum class HistoryKind { Constant, Exponential };

struct DdeOptions {
    DdeSystemKind system = DdeSystemKind::Homogeneous;
    double gamma = 0.1;
    double alpha = 0.0;
    double t_delay = 0.0;
    double dt = 0.01;
    double t_end = 100.0;
    HistoryKind history = HistoryKind::Constant;
    /// Exponential history rate; defaults to Re of the rightmost root.
    std::optional<double> history_rate;
    std::optional<double> beta;
    std::optional<double> r0;
    double rho = 0.0;
    std::optional<double> mu;
    double cv = 0.0;
    std::optional<std::string> dist_path;
    SusceptibleMode susceptible = SusceptibleMode::Frozen;
    SeedingMode seeding = SeedingMode::Uniform;
    double i0 = 1e-5;
    std::optional<std::pair<double, double>> window;
    bool lemma1 = false;
};

struct DdeResult {
    Trajectory trajectory;
    std::string observable;
    GrowthFit fit;
    double window_start = 0.0;
    double window_end = 0.0;
    std::optional<double> max_relative_gap;  ///< paired partitioned/reduced run only
};

[[nodiscard]] DdeResult run_dde(const DdeOptions& options);
void write_dde_summary(std::ostream& out, const DdeResult& result);

// --- netsim --------------------------------------------------------------

/// Runs the ensemble and checks per-day population conservation.
[[nodiscard]] NetworkEnsembleStats run_netsim(const EnsembleConfig& config);
void write_netsim_summary(std::ostream& out, const NetworkEnsembleStats& stats);

// --- metadata ------------------------------------------------------------

/// Flat `key=value` sidecar, keys sorted.
void write_metadata(const std::string& path, const std::map<std::string, std::string>& entries);

}  // namespace isodelay::cli
