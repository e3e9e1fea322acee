#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pngd::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kCompareFail = 1, kInvalidInput = 2, kCertification = 3 };

// Bad parameters or malformed/incompatible tables (exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Provenance header plus a numeric table. meta["kind"] is one of
//   pmf      columns value, probability (integer support), optional count
//   samples  columns value (continuous draws), or several observables
//   cdf      columns x, cdf; meta["domain"] = integer | real
//   curve    anything else (g(y), densities, reports)
struct DistTable {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;  // throws InputError
    std::vector<double> col(const std::string& name) const;
    std::string get(const std::string& key, const std::string& fallback = "") const;
    friend bool operator==(const DistTable&, const DistTable&) = default;
};

std::string to_csv(const DistTable& t);
DistTable from_csv(const std::string& text);
std::string to_json(const DistTable& t);
DistTable from_json(const std::string& text);

enum class Format { Csv, Json };
Format format_from_name(const std::string& name);  // csv | json
Format format_from_path(const std::string& path);  // by extension, csv by default
std::string serialize(const DistTable& t, Format f);
DistTable parse(const std::string& text);  // sniffs JSON by a leading '{'
DistTable read_table(const std::string& path);
void write_table(const DistTable& t, const std::string& path, Format f);  // "-" or "" is stdout

// Tolerances, overridable through PNGD_KS_TOL, PNGD_TV_TOL, PNGD_FREDHOLM_TOL.
struct Tolerances {
    double ks = 0.05;
    double tv = 0.02;
    double fredholm = 1e-10;
    static Tolerances from_env();
};

struct SimulateConfig {
    std::string observable = "h0";  // h0 flat-prob scaled joint rsk-h0 rsk-steps gw-h0 gw-steps discrete-h0
    double t = 1.0;
    double y = 0.0;
    double delta = 0.05;
    std::int64_t samples = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
};
DistTable cmd_simulate(const SimulateConfig& cfg);

struct ExactConfig {
    std::string curve = "f2";  // f2 density height-cdf joint g painleve
    double t = 5.0;
    std::string grid = "-6:4:0.1";  // lo:hi:step
    std::string y = "1";            // value, list a,b,c or lo:hi:log[:n] / lo:hi:step
    double fredholm_tol = 1e-10;
};
DistTable cmd_exact(const ExactConfig& cfg);

struct ComparisonReport {
    double ks = 0.0;
    double tv = 0.0;  // NaN when not applicable
    double mean_delta = 0.0;
    double variance_delta = 0.0;
    bool pass = false;
    DistTable table() const;
};
ComparisonReport cmd_compare(const DistTable& a, const DistTable& b, const Tolerances& tol);

struct ConvergenceConfig {
    std::string kind = "kernel";  // kernel | discrete
    std::string t_list = "100,1000,10000";
    double y = 0.0, y2 = 0.0, lo = -4.0, hi = 4.0;
    double t = 1.0;
    std::string deltas = "0.25,0.125,0.0625";
    int replicas = 4000;
    std::uint64_t seed = 1;
};
DistTable cmd_convergence(const ConvergenceConfig& cfg);

// "a,b,c", "lo:hi:step" or "lo:hi:log[:n]".
std::vector<double> parse_values(const std::string& spec);

// Full command line, returns the exit code. Used by the pngd binary.
int run(int argc, char** argv);

}  // namespace pngd::cli
