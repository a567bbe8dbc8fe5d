#include "cli.hpp"

#include "collopt/lindblad_oracle.hpp"
#include "collopt/response.hpp"
#include "collopt/sweeps.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace collopt::cli {

namespace {

void write_dataset(const Dataset& data, const std::filesystem::path& csv,
                   const std::vector<std::string>& assumptions)
{
    {
        std::ofstream f(csv, std::ios::binary);
        if (!f)
            throw ConfigError("cannot write '" + csv.string() + "'");
        write_csv(f, data);
    }
    std::filesystem::path meta = csv;
    meta += ".meta.json";
    std::ofstream m(meta, std::ios::binary);
    if (!m)
        throw ConfigError("cannot write '" + meta.string() + "'");
    m << dataset_metadata(data, assumptions).dump(2) << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Collective dressed-state steady states and weak-probe optical response", "collopt"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "Maximum worker threads (0 = all cores)");

    std::string sweep_config;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter sweep from a JSON config");
    sweep->add_option("config", sweep_config, "Config file")->required();
    sweep->add_option("--out", sweep_out, "CSV output path (metadata goes to <path>.meta.json)");

    std::string figure_name;
    std::string figure_out = ".";
    auto* figure = app.add_subcommand("figure", "Write a preset figure dataset");
    figure->add_option("name", figure_name, "fig2a|fig2b|fig3a|fig3b|fig3c|fig3d")->required();
    figure->add_option("--out", figure_out, "Output directory");

    std::string oracle_config;
    std::string oracle_out;
    auto* oracle_cmd = app.add_subcommand("oracle", "Compare closed forms with the master-equation solve");
    oracle_cmd->add_option("config", oracle_config, "Config file with an oracle block")->required();
    oracle_cmd->add_option("--out", oracle_out, "Report output path (default stdout)");

    std::string switching_config;
    auto* switching = app.add_subcommand("switching-time", "Collective switching time estimate");
    switching->add_option("config", switching_config, "Config file with geometry")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return success;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << '\n';
        return usage_error;
    }

    try {
        if (*sweep) {
            const auto data = run_sweep(load_config(sweep_config), threads);
            if (sweep_out.empty())
                write_csv(out, data);
            else
                write_dataset(data, sweep_out, {});
            return success;
        }
        if (*figure) {
            std::vector<FigureRun> runs;
            try {
                runs = figure_runs(figure_name);
            } catch (const UnknownFigure& ex) {
                err << "error: " << ex.what() << '\n';
                return usage_error;
            }
            std::filesystem::create_directories(figure_out);
            for (const auto& run : runs) {
                const auto path = std::filesystem::path(figure_out) / (run.file_stem + ".csv");
                write_dataset(run_sweep(run.config, threads), path, run.assumptions);
                out << path.string() << '\n';
            }
            return success;
        }
        if (*oracle_cmd) {
            const auto report = compare_oracle(load_config(oracle_config));
            if (oracle_out.empty()) {
                write_report(out, report);
            } else {
                std::ofstream f(oracle_out, std::ios::binary);
                write_report(f, report);
            }
            return report.all_pass() ? success : validation_failure;
        }
        if (*switching) {
            std::ifstream in(switching_config);
            if (!in)
                throw ConfigError("cannot open config file '" + switching_config + "'");
            nlohmann::json j;
            in >> j;
            const auto cfg = config_from_json(j);
            if (!cfg.geometry)
                throw ConfigError("geometry: required for switching-time");
            const int n = j.contains("n_atoms") ? j.at("n_atoms").get<int>()
                                                : cfg.ensembles.front().n_atoms;
            out << format_value(switching_time(*cfg.geometry, n)) << '\n';
            return success;
        }
    } catch (const oracle::DegenerateSteadyState& ex) {
        err << "error: " << ex.what() << '\n';
        return validation_failure;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return validation_failure;
    }
    return usage_error;
}

} // namespace collopt::cli
