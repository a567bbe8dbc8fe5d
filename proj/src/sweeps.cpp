#include "collopt/sweeps.hpp"

#include "collopt/lindblad_oracle.hpp"
#include "collopt/steady_state.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>
#include <tuple>

namespace collopt {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const std::string& path, const char* key, const T& fallback, bool required)
{
    if (!j.contains(key)) {
        if (required)
            throw ConfigError(path + "." + key + ": required field missing");
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + "." + key + ": wrong type");
    }
}

EnsembleParams ensemble_from_json(const json& j, const std::string& path, Species fallback)
{
    if (!j.is_object())
        throw ConfigError(path + ": expected an object");
    EnsembleParams e;
    e.label = fallback;
    if (j.contains("label")) {
        try {
            e.label = species_from_string(field<std::string>(j, path, "label", "", true));
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(path + ".label: " + ex.what());
        }
    }
    e.n_atoms = field<int>(j, path, "n_atoms", 1, true);
    e.gamma = field<double>(j, path, "gamma", 1.0, false);
    e.r = field<double>(j, path, "r", 0.0, false);
    e.delta = field<double>(j, path, "delta", 0.0, false);
    e.omega = field<double>(j, path, "omega", 0.0, true);
    e.density_prefactor = field<double>(j, path, "density_prefactor", 1.0, false);
    return e;
}

json ensemble_to_json(const EnsembleParams& e)
{
    return {{"label", to_string(e.label)}, {"n_atoms", e.n_atoms}, {"gamma", e.gamma},
            {"r", e.r},   {"delta", e.delta},     {"omega", e.omega},
            {"density_prefactor", e.density_prefactor}};
}

std::string variable_name(SweepVariable v)
{
    return v == SweepVariable::delta_a_over_2omega ? "delta_a_over_2omega" : "probe_offset";
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n && !failed; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        if (!failed.exchange(true))
                            failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace

std::vector<double> SweepRange::grid() const
{
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[i] = (i == points - 1) ? hi : lo + (hi - lo) * i / (points - 1);
    return g;
}

void SweepConfig::validate() const
{
    if (ensembles.size() != 2)
        throw ConfigError("ensembles: exactly two ensembles (a, b) required");
    for (std::size_t i = 0; i < ensembles.size(); ++i) {
        try {
            ensembles[i].validate();
        } catch (const InvalidRegime& ex) {
            throw ConfigError("ensembles[" + std::to_string(i) + "]: " + ex.what());
        }
        if (!(ensembles[i].gamma > 0.0))
            throw ConfigError("ensembles[" + std::to_string(i) + "].gamma: must be > 0 for a sweep");
    }
    if (!std::isfinite(sweep.lo) || !std::isfinite(sweep.hi) || !(sweep.lo < sweep.hi))
        throw ConfigError("sweep: lo must be < hi");
    if (sweep.points < 2)
        throw ConfigError("sweep.points: must be >= 2");
    if (!std::isfinite(probe_offset_over_2omega))
        throw ConfigError("probe_offset_over_2omega: must be finite");
    if (!std::isfinite(density_prefactor) || density_prefactor < 0.0)
        throw ConfigError("density_prefactor: must be finite and >= 0");
    if (!std::isfinite(nu_over_gamma) || nu_over_gamma <= 0.0)
        throw ConfigError("nu_over_gamma: must be > 0");
    if (geometry) {
        try {
            geometry->validate();
        } catch (const InvalidRegime& ex) {
            throw ConfigError(std::string("geometry: ") + ex.what());
        }
    }
    if (oracle) {
        if (oracle->n_atoms.empty() || oracle->omega_over_gamma.empty() ||
            oracle->delta_over_2omega.empty())
            throw ConfigError("oracle: n_atoms, omega_over_gamma and delta_over_2omega must be non-empty");
        for (double w : oracle->omega_over_gamma)
            if (!(w > 0.0))
                throw ConfigError("oracle.omega_over_gamma: entries must be > 0");
        if (!(oracle->tolerance > 0.0))
            throw ConfigError("oracle.tolerance: must be > 0");
    }
}

SweepConfig config_from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config: expected a JSON object");
    SweepConfig c;
    if (!j.contains("ensembles") || !j.at("ensembles").is_array())
        throw ConfigError("ensembles: required array missing");
    const auto& ens = j.at("ensembles");
    for (std::size_t i = 0; i < ens.size(); ++i)
        c.ensembles.push_back(ensemble_from_json(ens[i], "ensembles[" + std::to_string(i) + "]",
                                                 i == 0 ? Species::a : Species::b));

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        const auto var = field<std::string>(s, "sweep", "variable", "delta_a_over_2omega", false);
        if (var == "delta_a_over_2omega")
            c.sweep.variable = SweepVariable::delta_a_over_2omega;
        else if (var == "probe_offset")
            c.sweep.variable = SweepVariable::probe_offset;
        else
            throw ConfigError("sweep.variable: expected delta_a_over_2omega or probe_offset");
        c.sweep.lo = field<double>(s, "sweep", "lo", c.sweep.lo, true);
        c.sweep.hi = field<double>(s, "sweep", "hi", c.sweep.hi, true);
        c.sweep.points = field<int>(s, "sweep", "points", c.sweep.points, true);
    }
    c.probe_offset_over_2omega =
        field<double>(j, "config", "probe_offset_over_2omega", c.probe_offset_over_2omega, false);
    c.density_prefactor = field<double>(j, "config", "density_prefactor", c.density_prefactor, false);
    c.nu_over_gamma = field<double>(j, "config", "nu_over_gamma", c.nu_over_gamma, false);

    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        SampleGeometry geom;
        geom.length_L = field<double>(g, "geometry", "length_L", geom.length_L, true);
        geom.area_S = field<double>(g, "geometry", "area_S", geom.area_S, false);
        geom.lambda = field<double>(g, "geometry", "lambda", geom.lambda, true);
        geom.gamma_phys = field<double>(g, "geometry", "gamma_phys", geom.gamma_phys, true);
        geom.c = field<double>(g, "geometry", "c", geom.c, false);
        c.geometry = geom;
    }
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        OracleBlock ob;
        ob.n_atoms = field<std::vector<int>>(o, "oracle", "n_atoms", ob.n_atoms, false);
        ob.omega_over_gamma =
            field<std::vector<double>>(o, "oracle", "omega_over_gamma", ob.omega_over_gamma, false);
        ob.delta_over_2omega = field<std::vector<double>>(o, "oracle", "delta_over_2omega",
                                                          ob.delta_over_2omega, false);
        ob.tolerance = field<double>(o, "oracle", "tolerance", ob.tolerance, false);
        ob.include_cross_damping =
            field<bool>(o, "oracle", "include_cross_damping", ob.include_cross_damping, false);
        c.oracle = ob;
    }
    c.validate();
    return c;
}

json config_to_json(const SweepConfig& c)
{
    json j;
    j["ensembles"] = json::array();
    for (const auto& e : c.ensembles)
        j["ensembles"].push_back(ensemble_to_json(e));
    j["sweep"] = {{"variable", variable_name(c.sweep.variable)},
                  {"lo", c.sweep.lo},
                  {"hi", c.sweep.hi},
                  {"points", c.sweep.points}};
    j["probe_offset_over_2omega"] = c.probe_offset_over_2omega;
    j["density_prefactor"] = c.density_prefactor;
    j["nu_over_gamma"] = c.nu_over_gamma;
    if (c.geometry) {
        const auto& g = *c.geometry;
        j["geometry"] = {{"length_L", g.length_L}, {"area_S", g.area_S}, {"lambda", g.lambda},
                         {"gamma_phys", g.gamma_phys}, {"c", g.c}};
    }
    if (c.oracle) {
        const auto& o = *c.oracle;
        j["oracle"] = {{"n_atoms", o.n_atoms},
                       {"omega_over_gamma", o.omega_over_gamma},
                       {"delta_over_2omega", o.delta_over_2omega},
                       {"tolerance", o.tolerance},
                       {"include_cross_damping", o.include_cross_damping}};
    }
    return j;
}

SweepConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& ex) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + ex.what());
    }
    return config_from_json(j);
}

std::vector<EnsembleParams> ensembles_at(const SweepConfig& config, double grid_value)
{
    std::vector<EnsembleParams> out = config.ensembles;
    if (config.sweep.variable == SweepVariable::delta_a_over_2omega && !out.empty()) {
        const double delta_a = grid_value * 2.0 * out.front().omega;
        const double shift = delta_a - out.front().delta;
        for (auto& e : out)
            e.delta += shift;
        out.front().delta = delta_a;
    }
    return out;
}

ProbePoint probe_at(const SweepConfig& config, double grid_value)
{
    const auto ens = ensembles_at(config, grid_value);
    const auto& a = ens.front();
    const double offset_units = config.sweep.variable == SweepVariable::probe_offset
                                    ? grid_value
                                    : config.probe_offset_over_2omega;
    return ProbePoint::from_offset(offset_units * 2.0 * a.omega, a.delta);
}

Dataset run_sweep(const SweepConfig& config, unsigned threads)
{
    config.validate();
    Dataset data;
    data.config = config;
    const auto grid = config.sweep.grid();
    data.rows.resize(grid.size());

    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const auto ens = ensembles_at(config, grid[i]);
        const auto solved = solve_all(ens);
        DatasetRow row;
        row.grid_value = grid[i];
        row.state_a = solved[0].state;
        row.state_b = solved[1].state;
        row.n_a = ens[0].n_atoms;
        row.n_b = ens[1].n_atoms;
        row.response = evaluate_response(probe_at(config, grid[i]), solved,
                                         config.density_prefactor, config.nu_over_gamma);
        data.rows[i] = row;
    });
    return data;
}

json dataset_metadata(const Dataset& data, const std::vector<std::string>& assumptions)
{
    json meta;
    meta["tool"] = "collopt";
    meta["version"] = kToolVersion;
    meta["parameters"] = config_to_json(data.config);
    meta["grid"] = {{"variable", variable_name(data.config.sweep.variable)},
                    {"lo", data.config.sweep.lo},
                    {"hi", data.config.sweep.hi},
                    {"points", data.config.sweep.points},
                    {"rows", data.rows.size()}};
    meta["columns"] = kCsvHeader;
    meta["assumptions"] = assumptions;
    return meta;
}

// Figures ---------------------------------------------------------------------

namespace {

// Shared caption parameters: N = 1000, 2 Omega / (N gamma) = 10,
// delta_omega / (2 Omega) = 0.1, r / gamma = 0.3.
SweepConfig caption_base(int n_atoms)
{
    constexpr double gamma = 1.0;
    constexpr double omega = 5.0 * 1000 * gamma;
    constexpr double delta_omega = 0.1 * 2.0 * omega;

    SweepConfig c;
    EnsembleParams a{Species::a, n_atoms, gamma, 0.3 * gamma, 0.0, omega, 1.0};
    EnsembleParams b = a;
    b.label = Species::b;
    b.delta = a.delta - delta_omega;
    c.ensembles = {a, b};
    c.sweep = {SweepVariable::delta_a_over_2omega, -0.5, 0.5, 1001};
    c.density_prefactor = 0.1;
    c.nu_over_gamma = 1e8;
    return c;
}

const std::vector<std::string> kCommonAssumptions = {
    "gamma_b = gamma_a = 1 (rates in units of gamma_a)",
    "delta_a/(2 Omega) range read off the figure axes",
    "density_prefactor 0.1 and nu/gamma 1e8 used for the n and n_g columns",
};

FigureRun make_run(std::string stem, SweepConfig cfg, std::vector<std::string> extra)
{
    std::vector<std::string> notes = kCommonAssumptions;
    notes.insert(notes.end(), extra.begin(), extra.end());
    return {std::move(stem), std::move(cfg), std::move(notes)};
}

} // namespace

const std::vector<std::string>& figure_names()
{
    static const std::vector<std::string> names = {"fig2a", "fig2b", "fig3a",
                                                   "fig3b", "fig3c", "fig3d"};
    return names;
}

std::vector<FigureRun> figure_runs(const std::string& name)
{
    constexpr double enlarge_lo = -0.002;
    constexpr double enlarge_hi = 0.004;

    if (name == "fig2a") {
        auto exterior = caption_base(1000);
        auto interior = caption_base(1);
        exterior.probe_offset_over_2omega = interior.probe_offset_over_2omega = 0.35;
        const std::string note =
            "Omega = 5000 gamma for both atom numbers; inversion depends only on delta/(2 Omega) and r/gamma";
        return {make_run("fig2a_N1000", exterior, {note}), make_run("fig2a_N1", interior, {note})};
    }
    if (name == "fig2b") {
        auto c = caption_base(1000);
        c.probe_offset_over_2omega = 0.35;
        return {make_run("fig2b", c, {})};
    }
    if (name == "fig3a" || name == "fig3b" || name == "fig3c" || name == "fig3d") {
        auto c = caption_base(1000);
        c.probe_offset_over_2omega = (name == "fig3a" || name == "fig3b") ? -1.0 : 1.0;
        std::vector<std::string> extra;
        if (name == "fig3b" || name == "fig3d") {
            c.sweep = {SweepVariable::delta_a_over_2omega, enlarge_lo, enlarge_hi, 2001};
            extra.emplace_back("enlargement window [-0.002, 0.004] chosen to contain the zero-absorption crossings");
        } else {
            c.sweep.points = 2001;
        }
        return {make_run(name, c, extra)};
    }
    throw UnknownFigure("unknown figure '" + name + "'");
}

// Oracle comparison ---------------------------------------------------------

bool OracleReport::all_pass() const
{
    return !rows.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

OracleReport compare_oracle(const SweepConfig& config)
{
    config.validate();
    if (!config.oracle)
        throw ConfigError("oracle: block required for an oracle comparison");
    const auto& ob = *config.oracle;
    for (int n : ob.n_atoms)
        if (n < 1 || n > oracle::kMaxAtomsPerEnsemble)
            throw oracle::SizeError("oracle.n_atoms: " + std::to_string(n) + " outside [1, " +
                                    std::to_string(oracle::kMaxAtomsPerEnsemble) + "]");

    const auto& a0 = config.ensembles[0];
    const auto& b0 = config.ensembles[1];
    const double split_over_2omega = (a0.delta - b0.delta) / (2.0 * a0.omega);

    std::vector<double> drives = ob.omega_over_gamma;
    std::sort(drives.begin(), drives.end());

    OracleReport report;
    std::map<std::tuple<int, double, int>, std::vector<double>> errors;
    for (int n : ob.n_atoms) {
        for (double d2o : ob.delta_over_2omega) {
            for (double w : drives) {
                std::vector<EnsembleParams> ens = {a0, b0};
                for (auto& e : ens) {
                    e.n_atoms = n;
                    e.omega = w * e.gamma;
                }
                ens[0].delta = d2o * 2.0 * ens[0].omega;
                ens[1].delta = ens[0].delta - split_over_2omega * 2.0 * ens[0].omega;

                const auto model = oracle::build_liouvillian(ens, ob.include_cross_damping);
                const auto ss = oracle::steady_rho(model);
                for (std::size_t i = 0; i < ens.size(); ++i) {
                    OracleComparisonRow row;
                    row.n_atoms = n;
                    row.omega_over_gamma = w;
                    row.delta_over_2omega = d2o;
                    row.species = ens[i].label;
                    row.analytic = solve_ensemble(ens[i]).rz;
                    row.oracle = oracle::dressed_inversion(model, ss.rho, i);
                    row.abs_error = std::abs(row.oracle - row.analytic);
                    const bool zero_ref = std::abs(row.analytic) < 1e-12;
                    row.rel_error = zero_ref ? row.abs_error : row.abs_error / std::abs(row.analytic);
                    row.pass = row.rel_error <= ob.tolerance;
                    report.rows.push_back(row);
                    errors[{n, d2o, static_cast<int>(i)}].push_back(row.abs_error);
                }
            }
        }
    }
    for (const auto& [key, errs] : errors) {
        OracleTrend t;
        t.n_atoms = std::get<0>(key);
        t.delta_over_2omega = std::get<1>(key);
        t.species = std::get<2>(key) == 0 ? Species::a : Species::b;
        t.abs_errors = errs;
        t.decreasing = std::adjacent_find(errs.begin(), errs.end(),
                                          [](double x, double y) { return y >= x; }) == errs.end();
        report.trends.push_back(t);
    }
    return report;
}

} // namespace collopt
