#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ultimum/error.hpp"

namespace {

using namespace ultimum;
using namespace ultimum::cli;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void log(const std::string& msg) { std::cerr << "ultimum: " << msg << '\n'; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading config '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

void emit(const std::optional<std::string>& out, const std::string& content) {
    if (out) {
        write_file(*out, content);
        log("wrote " + *out);
    } else {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string stamped(nlohmann::json report) {
    report["timestamp"] = utc_timestamp();
    return report.dump(2) + '\n';
}

int run(const std::string& command, const std::string& config_path, const std::optional<std::string>& out,
        const std::optional<std::uint64_t>& seed) {
    RunConfig cfg = parse_config(read_file(config_path));
    if (seed) cfg.seed = *seed;
    log(command + " (seed " + std::to_string(cfg.seed) + ")");

    if (command == "solve") {
        emit(out, stamped(solve_report(cfg)));
    } else if (command == "curve") {
        emit(out, curve_csv(cfg));
        if (out) write_file(*out + ".meta.json", stamped(envelope("curve", cfg)));
    } else if (command == "verify") {
        const auto result = verify(cfg);
        emit(out, stamped(result.report));
        if (out) write_file(*out + ".sweep.csv", result.sweep_csv);
        log(std::string("verdict ") + (result.pass ? "PASS" : "FAIL"));
    } else {
        const auto result = occupation(cfg);
        emit(out, stamped(result.report));
        if (out) write_file(*out + ".bins.csv", result.bins_csv);
        log(std::string("occupation within 3 SE: ") + (result.pass ? "yes" : "no"));
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal prediction of the time of the ultimate supremum of a spectrally negative Levy process"};
    app.set_version_flag("--version", std::string(ULTIMUM_VERSION));
    std::string command;
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    app.add_option("command", command, "solve | curve | verify | occupation")
        ->required()
        ->check(CLI::IsMember({"solve", "curve", "verify", "occupation"}));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out, "output path (default: stdout)");
    app.add_option("--seed", seed, "master seed, overrides the config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_invalid;
    }

    try {
        return run(command, config_path, out, seed);
    } catch (const IoError& e) {
        log(std::string("I/O error: ") + e.what());
        return exit_io;
    } catch (const ConfigError& e) {
        log(std::string("invalid configuration: ") + e.what());
        return exit_invalid;
    } catch (const DegenerateModelError& e) {
        log(std::string("degenerate model: ") + e.what());
        return exit_invalid;
    } catch (const DomainError& e) {
        log(std::string("invalid input: ") + e.what());
        return exit_invalid;
    } catch (const SimulationQualityError& e) {
        log(std::string("simulation quality: ") + e.what());
        return exit_quality;
    } catch (const std::exception& e) {
        log(std::string("internal error: ") + e.what());
        return exit_internal;
    }
}
