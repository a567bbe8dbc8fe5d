#pragma once

// Parameter sweeps, figure presets and oracle comparison reports built on
// the analytic modules. Configuration is JSON; datasets are CSV.

#include "collopt/core_model.hpp"
#include "collopt/response.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace collopt {

inline constexpr const char* kToolVersion = "1.0.0";

/// Configuration problem, reported with the offending field path.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unrecognized figure name.
class UnknownFigure : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class SweepVariable { delta_a_over_2omega, probe_offset };

struct SweepRange {
    SweepVariable variable = SweepVariable::delta_a_over_2omega;
    double lo = -0.5;
    double hi = 0.5;
    int points = 101;

    std::vector<double> grid() const;
};

struct OracleBlock {
    std::vector<int> n_atoms{1};
    std::vector<double> omega_over_gamma{20.0, 50.0, 200.0};
    std::vector<double> delta_over_2omega{0.1, -0.1};
    double tolerance = 0.05;
    bool include_cross_damping = false;
};

struct SweepConfig {
    /// Ensemble a first, then b. Their configured detunings fix
    /// delta_omega = delta_a - delta_b, which a detuning sweep keeps constant.
    std::vector<EnsembleParams> ensembles;
    SweepRange sweep;
    /// nu - omega_a in units of 2 Omega_a (ignored by probe_offset sweeps).
    double probe_offset_over_2omega = 0.0;
    /// Sample-level N d^2 / (gamma hbar) applied to n and n_g.
    double density_prefactor = 1.0;
    double nu_over_gamma = 1e8;
    std::optional<SampleGeometry> geometry;
    std::optional<OracleBlock> oracle;

    void validate() const;
};

SweepConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SweepConfig& c);
/// Reads and parses a config file; a missing file is a ConfigError.
SweepConfig load_config(const std::string& path);

struct DatasetRow {
    double grid_value = 0.0;  ///< sweep coordinate of this row
    DressedSteadyState state_a;
    DressedSteadyState state_b;
    int n_a = 1;
    int n_b = 1;
    ResponseSample response;
};

struct Dataset {
    SweepConfig config;
    std::vector<DatasetRow> rows;
};

/// Evaluates every grid point, using up to `threads` workers (0 = hardware
/// concurrency). Rows come back in grid order.
Dataset run_sweep(const SweepConfig& config, unsigned threads = 1);

/// Ensembles at one sweep coordinate.
std::vector<EnsembleParams> ensembles_at(const SweepConfig& config, double grid_value);
/// Probe point at one sweep coordinate.
ProbePoint probe_at(const SweepConfig& config, double grid_value);

// CSV -----------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "delta_a_over_2omega,rz_a_over_N,rz_b_over_N,chi_prime,chi_double_prime,dchi_prime,n,n_g,"
    "propagating";

struct CsvRow {
    double delta_a_over_2omega = 0.0;
    double rz_a_over_n = 0.0;
    double rz_b_over_n = 0.0;
    double chi_prime = 0.0;
    double chi_double_prime = 0.0;
    double dchi_prime = 0.0;
    double n = 0.0;
    double n_g = 0.0;
    bool propagating = false;
};

/// 12 significant digits, "nan" for missing values.
std::string format_value(double v);
CsvRow to_csv_row(const DatasetRow& row);
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);
void write_csv(std::ostream& out, const Dataset& data);
std::vector<CsvRow> read_csv(std::istream& in);

/// Sidecar metadata: parameters, grid, tool version and preset assumptions.
nlohmann::json dataset_metadata(const Dataset& data,
                                const std::vector<std::string>& assumptions = {});

// Figures ---------------------------------------------------------------------

struct FigureRun {
    std::string file_stem;  ///< e.g. "fig2a_N1000"
    SweepConfig config;
    std::vector<std::string> assumptions;
};

/// Preset sweeps for fig2a, fig2b, fig3a, fig3b, fig3c, fig3d.
std::vector<FigureRun> figure_runs(const std::string& name);
const std::vector<std::string>& figure_names();

// Oracle comparison ---------------------------------------------------------

struct OracleComparisonRow {
    int n_atoms = 1;
    double omega_over_gamma = 0.0;
    double delta_over_2omega = 0.0;
    Species species = Species::a;
    double analytic = 0.0;
    double oracle = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;
    bool pass = false;
};

struct OracleTrend {
    int n_atoms = 1;
    double delta_over_2omega = 0.0;
    Species species = Species::a;
    std::vector<double> abs_errors;  ///< ordered by increasing omega_over_gamma
    bool decreasing = false;
};

struct OracleReport {
    std::vector<OracleComparisonRow> rows;
    std::vector<OracleTrend> trends;
    bool all_pass() const;
};

/// Steady-state inversion of the closed form against the master-equation
/// solve, for every (N, Omega/gamma, delta/2Omega) in the oracle block.
OracleReport compare_oracle(const SweepConfig& config);
void write_report(std::ostream& out, const OracleReport& report);

} // namespace collopt
