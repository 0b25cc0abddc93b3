#include "hqw/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace hqw::cli {

namespace {

void add_output_options(CLI::App& sub, RunConfig& c) {
    sub.add_option("--out", c.out, "Output file ('-' for stdout; default out/<subcommand>-<hash>.<ext>)");
    sub.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_walk_options(CLI::App& sub, RunConfig& c) {
    sub.add_option("--graph", c.graphs, "builder:params (e.g. circle2:2w,2w+1, star:10, line3:108) or graph.json")
        ->expected(1);
    sub.add_option("--coin", c.coin, "identity | hadamard | fourier | grover | custom:coin.json");
    sub.add_option("--steps", c.steps, "Number of walk steps");
    sub.add_option("--init", c.init, "Initial state, e.g. coin:uniform/pos:center, basis:0/pos:3, amp:[1,0;0,-1]/pos:0");
    sub.add_option("--sweep", c.sweeps, "Grid name:start:stop:points");
    sub.add_flag("--every-step", c.every_step, "Emit a row for every step, not just the last");
    add_output_options(sub, c);
}

void add_estimate_options(CLI::App& sub, RunConfig& c) {
    sub.add_option("--mode", c.mode, "exact or shots")->check(CLI::IsMember({"exact", "shots"}));
    sub.add_option("--shots", c.shots, "Shots per projector estimate");
    sub.add_option("--seed", c.seed, "Seed for shots mode");
    add_output_options(sub, c);
}

CommandResult dispatch(const RunConfig& c) {
    if (c.subcommand == "dynamics") return cmd_dynamics(c);
    if (c.subcommand == "sweep") return cmd_sweep(c);
    if (c.subcommand == "pst") return cmd_pst(c);
    if (c.subcommand == "matmul") return cmd_matmul(c);
    return cmd_triangles(c);
}

void write_artifact(const std::string& path, const std::string& contents, std::ostream& out) {
    if (path == "-") {
        out << contents;
        return;
    }
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << contents;
    if (!f) throw ValidationError("failed writing '" + path + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hybrid quantum walk simulator"};
    app.require_subcommand(1);
    RunConfig c;

    auto* dyn = app.add_subcommand("dynamics", "Distributions, sigma and entropy over t (and omega) grids");
    add_walk_options(*dyn, c);
    dyn->add_option("--t", c.t, "Step time");

    auto* sweep = app.add_subcommand("sweep", "q sweeps on the three-label line (q_time, q_mix2, q_mix3, q_phase2, q_phase3)");
    add_walk_options(*sweep, c);

    auto* pst = app.add_subcommand("pst", "Perfect state transfer of a coin state between two vertices");
    pst->add_option("--graph", c.graphs, "Properly edge-colored graph")->expected(1);
    pst->add_option("--source", c.source, "Source vertex")->required();
    pst->add_option("--target", c.target, "Target vertex")->required();
    pst->add_option("--path", c.path, "Comma-separated vertex path (default: BFS shortest path)");
    pst->add_option("--alpha", c.alpha, "Coin state over the colors: coin:uniform | basis:k | amp:[re,im;...]");
    add_output_options(*pst, c);

    auto* mm = app.add_subcommand("matmul", "Entries of products of regular adjacency matrices");
    mm->add_option("--graph", c.graphs, "Factor graph; repeat for A^(1), A^(2), ...");
    mm->add_option("--power", c.power, "Use the single --graph this many times");
    mm->add_option("--entry", c.entry, "Single entry i,j");
    mm->add_flag("--trace", c.trace_only, "Trace of the product");
    add_estimate_options(*mm, c);

    auto* tri = app.add_subcommand("triangles", "Triangle counts from diagonal entries of A^3");
    tri->add_option("--graph", c.graphs, "Simple regular graph")->expected(1);
    tri->add_option("--vertex", c.vertex, "Count only triangles through this vertex");
    add_estimate_options(*tri, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }
    for (auto* sub : {dyn, sweep, pst, mm, tri})
        if (sub->parsed()) c.subcommand = sub->get_name();

    try {
        const CommandResult result = dispatch(c);
        const std::string path = output_path(c, result.extension);
        write_artifact(path, result.artifact, out);
        err << result.summary << "\n";
        if (path != "-") err << "wrote " << path << "\n";
        return result.exit_code;
    } catch (const InvariantError& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    }
}

}  // namespace hqw::cli
