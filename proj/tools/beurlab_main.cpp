#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beurlab/config.hpp"
#include "beurlab/errors.hpp"
#include "beurlab/experiment.hpp"
#include "beurlab/report.hpp"

namespace {

// "--key value" and "--key=value" pairs left over after the fixed options.
void apply_overrides(beurlab::ExperimentConfig& cfg, const std::vector<std::string>& extras) {
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& arg = extras[i];
        if (arg.rfind("--", 0) != 0 || arg.size() < 3)
            throw beurlab::ConfigError("unexpected argument '" + arg + "'");
        const std::string body = arg.substr(2);
        const auto eq = body.find('=');
        if (eq != std::string::npos) {
            cfg.set(body.substr(0, eq), body.substr(eq + 1));
            continue;
        }
        if (i + 1 >= extras.size()) throw beurlab::ConfigError("option '" + arg + "' needs a value");
        cfg.set(body, extras[++i]);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments on Beurling regular variation"};
    std::string command;
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::string table;
    bool no_timing = false;

    app.add_option("command", command, "Experiment to run")
        ->required()
        ->check(CLI::IsMember(beurlab::experiment_commands()));
    app.add_option("--config", config_path, "Flat key = value config file");
    app.add_option("--out", out_path, "Report path (stdout when omitted)");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--table", table, "Table written by the CSV format");
    app.add_flag("--no-timing", no_timing, "Leave runtime_ms out of JSON reports");
    app.footer("Further --key value pairs override config entries.\n"
               "Exit codes: 0 pass, 1 fail, 2 usage or config error, 3 aborted, 4 undecided.");
    app.allow_extras();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        beurlab::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = beurlab::load_config(config_path);
        if (!cfg.command.empty() && cfg.command != command)
            throw beurlab::ConfigError("config is for '" + cfg.command + "', not '" + command + "'");
        cfg.command = command;
        apply_overrides(cfg, app.remaining());

        beurlab::EmitOptions opts;
        opts.include_timing = !no_timing;
        opts.table = table;
        const auto report = beurlab::run_experiment(cfg);
        const std::string body = beurlab::emit_report(report, beurlab::parse_report_format(format), opts);
        if (out_path.empty())
            std::cout << body;
        else
            beurlab::write_report(out_path, body);

        std::cerr << command << ": " << beurlab::report_verdict_name(report.verdict);
        if (!report.error_kind.empty()) std::cerr << " (" << report.error_kind << ": " << report.error_message << ")";
        std::cerr << "\n";
        return beurlab::exit_code(report);
    } catch (const beurlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const beurlab::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const beurlab::Error& e) {
        std::cerr << e.kind() << ": " << e.what() << "\n";
        return 2;
    }
}
