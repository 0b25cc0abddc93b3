// Command-line front end: graph/coin/state mini-languages, run configuration,
// and the dynamics, sweep, pst, matmul and triangles subcommands.

#pragma once

#include "hqw/graph.hpp"
#include "hqw/linalg.hpp"
#include "hqw/matmul.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqw::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kInvariant = 2 };

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builder parameter of the form "c", "kw", or "kw+c" (w is the omega grid variable).
struct LinearParam {
    double slope = 0.0;
    double offset = 0.0;
    double at(double omega) const noexcept { return slope * omega + offset; }
    bool depends_on_omega() const noexcept { return slope != 0.0; }
};

LinearParam parse_linear_param(const std::string& text);

/// "builder:p1,p2,..." or a path ending in .json.
struct GraphSource {
    std::string builder;  // empty for a JSON file
    std::vector<LinearParam> params;
    std::string path;

    bool depends_on_omega() const;
    LabeledGraph build(double omega = 0.0) const;
};

GraphSource parse_graph_source(const std::string& text);

/// identity | hadamard | fourier | grover | custom:<path to JSON [[[re,im],...],...]>.
ComplexMatrix parse_coin(const std::string& text, std::size_t coin_dim);

/// "coin:uniform", "basis:k" or "amp:[re,im;re,im;...]" (normalized on use).
std::vector<cplx> parse_coin_amplitudes(const std::string& text, std::size_t coin_dim);

/// "<coin-part>/pos:<k|center>"; center is the vertex at coordinate 0 (vertex 0 if none).
struct InitialState {
    std::vector<cplx> coin;
    std::size_t vertex = 0;
};

InitialState parse_initial_state(const std::string& text, const LabeledGraph& g, std::size_t coin_dim);

/// name:start:stop:points with points >= 2, endpoints included.
struct Grid {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 0;
    std::vector<double> values() const;
};

Grid parse_grid(const std::string& text);

std::pair<std::size_t, std::size_t> parse_entry(const std::string& text);
std::vector<std::size_t> parse_index_list(const std::string& text);

/// Coin amplitudes of the initial states swept by the sweep subcommand.
std::vector<cplx> sweep_coin(const std::string& parameter, double q);
/// Walk time for one step of the sweep subcommand.
double sweep_time(const std::string& parameter, double q);
bool is_sweep_parameter(const std::string& name);

struct RunConfig {
    std::string subcommand;
    std::vector<std::string> graphs;
    std::string coin;                   // default: identity (dynamics), grover (sweep)
    std::optional<double> t;
    std::optional<std::size_t> steps;   // default: 1 (dynamics), 30 (sweep)
    bool every_step = false;
    std::string init;
    std::vector<std::string> sweeps;
    // pst
    std::optional<std::size_t> source;
    std::optional<std::size_t> target;
    std::string path;
    std::string alpha = "coin:uniform";
    // matmul / triangles
    std::size_t power = 1;
    std::string entry;
    bool trace_only = false;
    std::optional<std::size_t> vertex;
    std::string mode = "exact";
    std::uint64_t shots = 0;
    std::optional<std::uint64_t> seed;
    // output
    std::string out;
    std::string format;

    /// Stable textual form used for the default output file name.
    std::string canonical() const;
    EstimateMode estimate_mode() const;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

/// Chosen output path: --out, or ./out/<subcommand>-<hash>.<ext>; "-" means stdout.
std::string output_path(const RunConfig& config, const std::string& extension);

/// Worker count from HQW_THREADS (>= 1), defaulting to the hardware concurrency.
std::size_t worker_count();

/// %.12g
std::string format_number(double x);

struct CommandResult {
    int exit_code = kOk;
    std::string artifact;   // file contents written to the output path
    std::string extension;  // csv or json
    std::string summary;   // one-line human summary for stdout
};

CommandResult cmd_dynamics(const RunConfig& config);
CommandResult cmd_sweep(const RunConfig& config);
CommandResult cmd_pst(const RunConfig& config);
CommandResult cmd_matmul(const RunConfig& config);
CommandResult cmd_triangles(const RunConfig& config);

/// Full entry point: parses argv, runs the subcommand, writes the artifact,
/// maps ValidationError/InvariantError to exit codes 1/2.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hqw::cli
