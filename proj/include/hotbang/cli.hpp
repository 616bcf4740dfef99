#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "hotbang/json_io.hpp"

namespace hb {

struct RunConfig {
    std::uint64_t seed = 1;
    QuadConfig quad;
    StateSpec state = HotBang{0.5};

    struct Family {
        // "random" or "apex"; explicit functions replace the family.
        std::string kind = "random";
        int count = 100;
        std::vector<TestFunction> functions;
    } testfn;

    struct Positivity {
        std::vector<double> lambdas{0.25, 1.0, 4.0};
        double series_tol = 1e-8;
        double residual_tol = 1e-6;
    } positivity;

    struct Scan {
        std::vector<FourVector> points;
        std::vector<MacroObservable> observables{T2Obs{}};
    } scan;

    struct Verify {
        std::vector<std::string> checks;
        std::map<std::string, double> tolerances;
        double tolerance(const std::string& key) const;
    } verify;

    void validate() const;
    json to_json() const;
    // FNV-1a of the normalized JSON form.
    std::string digest() const;
};

// Throws ConfigError on malformed or invalid input.
RunConfig run_config_from_json(const json& j);
RunConfig load_run_config(const std::string& path);

// Names of the verify checks, in run order.
const std::vector<std::string>& verify_check_names();
std::map<std::string, double> default_verify_tolerances();

// Test function i of the configured family.
TestFunction family_member(const RunConfig& cfg, int i);
std::uint64_t family_seed(const RunConfig& cfg, int i);

enum ExitCode { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

// Each command writes CSV (and JSON for verify) to the stream or directory
// and returns an exit code; the first CSV line is "# config <digest>".
int command_positivity(const RunConfig& cfg, std::ostream& csv);
int command_scan(const RunConfig& cfg, std::ostream& csv);

struct VerifyOutput {
    std::vector<CheckReport> reports;
    int exit_code = kExitPass;
};
// filter: run only checks whose name contains it (empty runs all).
VerifyOutput run_verify(const RunConfig& cfg, const std::string& filter = "");
void write_verify(const RunConfig& cfg, const VerifyOutput& out, std::ostream& json_out, std::ostream& csv);

// Full driver: parses argv, runs, writes files under --out. Returns the exit code.
int cli_main(int argc, char** argv);

}  // namespace hb
