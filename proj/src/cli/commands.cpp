#include "hqw/cli.hpp"
#include "hqw/pst.hpp"
#include "hqw/walk.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

namespace hqw::cli {

namespace {

using nlohmann::ordered_json;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string render(const Table& table, const std::string& format) {
    if (format == "json") {
        ordered_json doc;
        doc["columns"] = table.columns;
        doc["rows"] = table.rows;
        return doc.dump() + "\n";
    }
    std::ostringstream s;
    for (std::size_t c = 0; c < table.columns.size(); ++c) s << (c ? "," : "") << table.columns[c];
    s << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) s << (c ? "," : "") << format_number(row[c]);
        s << "\n";
    }
    return s.str();
}

std::string resolve_format(const RunConfig& config, const std::string& fallback) {
    const std::string f = config.format.empty() ? fallback : config.format;
    if (f != "csv" && f != "json") throw ValidationError("--format must be csv or json");
    return f;
}

/// Runs job(i) for i in [0, count) on up to worker_count() threads. The
/// exception of the lowest failing index is rethrown.
template <class Job>
void parallel_for(std::size_t count, Job job) {
    const std::size_t workers = std::min(worker_count(), count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_distribution(std::span<const double> p, const std::string& where) {
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvariantError("probability drift at " + where + ": sum = " + format_number(total));
    }
}

const std::string& single_graph(const RunConfig& config) {
    if (config.graphs.size() != 1) throw ValidationError(config.subcommand + " needs exactly one --graph");
    return config.graphs.front();
}

std::vector<std::string> vertex_columns(std::size_t n) {
    std::vector<std::string> cols;
    for (std::size_t v = 0; v < n; ++v) cols.push_back("p_" + std::to_string(v));
    return cols;
}

/// Appends the observables of every requested step to `rows`, prefixed by `lead`.
void emit_rows(const Trajectory& tr, bool every_step, const std::vector<double>& lead,
               std::vector<std::vector<double>>& rows) {
    const std::size_t last = tr.distributions.size() - 1;
    for (std::size_t s = every_step ? 0 : last; s <= last; ++s) {
        std::vector<double> row = lead;
        row.push_back(static_cast<double>(s));
        row.insert(row.end(), tr.distributions[s].begin(), tr.distributions[s].end());
        row.push_back(tr.sigmas[s]);
        row.push_back(tr.entropies[s]);
        check_distribution(tr.distributions[s], "step " + std::to_string(s));
        rows.push_back(std::move(row));
    }
}

}  // namespace

CommandResult cmd_dynamics(const RunConfig& config) {
    const GraphSource source = parse_graph_source(single_graph(config));
    std::optional<Grid> t_grid;
    std::optional<Grid> w_grid;
    for (const auto& text : config.sweeps) {
        Grid g = parse_grid(text);
        if (g.name != "t" && g.name != "omega") {
            throw ValidationError("dynamics sweeps t or omega, not '" + g.name + "'");
        }
        auto& slot = g.name == "t" ? t_grid : w_grid;
        if (slot) throw ValidationError("--sweep " + g.name + " given twice");
        slot = std::move(g);
    }
    if (!t_grid && !config.t) throw ValidationError("dynamics needs --t or --sweep t:start:stop:points");
    if (t_grid && config.t) throw ValidationError("give either --t or a t sweep, not both");
    if (source.depends_on_omega() && !w_grid) throw ValidationError("graph uses w but no omega sweep was given");
    if (w_grid && !source.depends_on_omega()) throw ValidationError("omega sweep given but the graph does not use w");

    const std::vector<double> ts = t_grid ? t_grid->values() : std::vector<double>{*config.t};
    const std::vector<double> ws = w_grid ? w_grid->values() : std::vector<double>{0.0};
    const std::size_t steps = config.steps.value_or(1);
    const std::string coin_name = config.coin.empty() ? "identity" : config.coin;
    const std::string format = resolve_format(config, "csv");

    const LabeledGraph probe = source.build(ws.front());
    const std::size_t n = probe.vertex_count();
    const std::size_t coin_dim = probe.labels().size();
    const ComplexMatrix coin = parse_coin(coin_name, coin_dim);
    const InitialState init = parse_initial_state(config.init, probe, coin_dim);

    // One walk per omega; every (omega, t) point is an independent job.
    std::vector<std::optional<HybridWalk>> walks(ws.size());
    parallel_for(ws.size(), [&](std::size_t k) {
        LabeledGraph g = source.build(ws[k]);
        if (g.vertex_count() != n || g.labels() != probe.labels()) {
            throw ValidationError("graph shape changes across the omega grid");
        }
        walks[k].emplace(std::move(g), coin);
    });

    std::vector<std::vector<std::vector<double>>> blocks(ws.size() * ts.size());
    parallel_for(blocks.size(), [&](std::size_t idx) {
        const std::size_t wk = idx / ts.size();
        const std::size_t tk = idx % ts.size();
        const HybridWalk& walk = *walks[wk];
        const StateVector psi0 = walk.initial_state(init.coin, init.vertex);
        const Trajectory tr = hqw::run(walk, ts[tk], steps, psi0);
        std::vector<double> lead{ts[tk]};
        if (w_grid) lead.push_back(ws[wk]);
        emit_rows(tr, config.every_step, lead, blocks[idx]);
    });

    Table table;
    table.columns.push_back("t");
    if (w_grid) table.columns.push_back("omega");
    table.columns.push_back("step");
    for (auto& c : vertex_columns(n)) table.columns.push_back(std::move(c));
    table.columns.push_back("sigma");
    table.columns.push_back("entropy");
    for (auto& b : blocks)
        for (auto& row : b) table.rows.push_back(std::move(row));

    CommandResult result;
    result.artifact = render(table, format);
    result.extension = format;
    result.summary = "dynamics: " + std::to_string(table.rows.size()) + " rows, " + std::to_string(n) +
                     " vertices, coin " + coin_name;
    return result;
}

CommandResult cmd_sweep(const RunConfig& config) {
    if (config.sweeps.size() != 1) throw ValidationError("sweep needs exactly one --sweep <q_param>:start:stop:points");
    const Grid grid = parse_grid(config.sweeps.front());
    if (!is_sweep_parameter(grid.name)) {
        throw ValidationError("unknown sweep parameter '" + grid.name +
                              "' (expected q_time, q_mix2, q_mix3, q_phase2 or q_phase3)");
    }
    if (config.t) throw ValidationError("sweep fixes the step time; drop --t");
    if (config.graphs.size() > 1) throw ValidationError("sweep takes at most one --graph");
    const GraphSource source = parse_graph_source(config.graphs.empty() ? "line3:39" : config.graphs.front());
    if (source.depends_on_omega()) throw ValidationError("sweep graphs cannot use w");
    const LabeledGraph g = source.build();
    const std::size_t coin_dim = g.labels().size();
    if (coin_dim != 3) throw ValidationError("sweep initial states need a 3-label graph");
    const std::string coin_name = config.coin.empty() ? "grover" : config.coin;
    const HybridWalk walk(g, parse_coin(coin_name, coin_dim));
    const std::size_t steps = config.steps.value_or(30);
    const std::string format = resolve_format(config, "csv");
    const InitialState init = parse_initial_state(config.init, g, coin_dim);
    const bool custom_coin_state = grid.name == "q_time" && !config.init.empty() &&
                                   config.init.find("pos:") != 0;

    const std::vector<double> qs = grid.values();
    std::vector<std::vector<std::vector<double>>> blocks(qs.size());
    parallel_for(qs.size(), [&](std::size_t k) {
        const std::vector<cplx> coin = custom_coin_state ? init.coin : sweep_coin(grid.name, qs[k]);
        const Trajectory tr = hqw::run(walk, sweep_time(grid.name, qs[k]), steps, walk.initial_state(coin, init.vertex));
        emit_rows(tr, config.every_step, {qs[k]}, blocks[k]);
    });

    Table table;
    table.columns = {"q", "step"};
    for (auto& c : vertex_columns(g.vertex_count())) table.columns.push_back(std::move(c));
    table.columns.push_back("sigma");
    table.columns.push_back("entropy");
    for (auto& b : blocks)
        for (auto& row : b) table.rows.push_back(std::move(row));

    CommandResult result;
    result.artifact = render(table, format);
    result.extension = format;
    result.summary = "sweep " + grid.name + ": " + std::to_string(qs.size()) + " points, " +
                     std::to_string(steps) + " steps";
    return result;
}

CommandResult cmd_pst(const RunConfig& config) {
    const GraphSource source = parse_graph_source(single_graph(config));
    if (source.depends_on_omega()) throw ValidationError("pst graphs cannot use w");
    if (!config.source || !config.target) throw ValidationError("pst needs --source and --target");
    if (resolve_format(config, "json") != "json") throw ValidationError("pst writes JSON transcripts only");
    const LabeledGraph g = source.build();

    PstPlan plan;
    PstResult outcome;
    try {
        plan = make_pst_plan(g, *config.source, *config.target,
                             config.path.empty() ? std::vector<std::size_t>{} : parse_index_list(config.path));
        const std::vector<cplx> alpha = parse_coin_amplitudes(config.alpha, plan.colors_count());
        outcome = run_pst(plan, alpha);
    } catch (const PstError& e) {
        throw ValidationError(e.what());
    } catch (const GraphError& e) {
        throw ValidationError(e.what());
    }

    CommandResult result;
    result.artifact = transcript_json(plan, outcome.transcript) + "\n";
    result.extension = "json";
    const double f = outcome.transcript.fidelity;
    result.summary = "fidelity " + format_number(f) + " over path of length " + std::to_string(plan.path_length());
    result.exit_code = f > 1.0 - 1e-6 ? kOk : kInvariant;
    return result;
}

namespace {

RegularGraphSequence build_sequence(const RunConfig& config) {
    if (config.graphs.empty()) throw ValidationError(config.subcommand + " needs --graph");
    if (config.power == 0) throw ValidationError("--power must be >= 1");
    if (config.graphs.size() > 1 && config.power != 1) {
        throw ValidationError("--power applies to a single --graph");
    }
    std::vector<LabeledGraph> graphs;
    for (const auto& text : config.graphs) {
        const GraphSource src = parse_graph_source(text);
        if (src.depends_on_omega()) throw ValidationError("matmul graphs cannot use w");
        graphs.push_back(src.build());
    }
    try {
        if (graphs.size() == 1) return RegularGraphSequence::power(graphs.front(), config.power);
        return RegularGraphSequence::from_graphs(graphs);
    } catch (const MatmulError& e) {
        throw ValidationError(e.what());
    }
}

ordered_json estimate_json(const ProductEstimate& e) {
    ordered_json j;
    j["i"] = e.i;
    j["j"] = e.j;
    j["mode"] = e.mode.is_exact() ? "exact" : "shots";
    j["probability"] = e.probability;
    j["value"] = e.value;
    j["rounded"] = e.rounded();
    if (!e.mode.is_exact()) {
        j["estimate"] = e.estimate;
        j["hits"] = e.hits;
        j["shots"] = e.mode.shots;
        j["seed"] = e.mode.seed;
        j["precision_met"] = e.precision_met;
    }
    return j;
}

}  // namespace

CommandResult cmd_matmul(const RunConfig& config) {
    const RegularGraphSequence seq = build_sequence(config);
    const EstimateMode mode = config.estimate_mode();
    const std::size_t n = seq.n();
    const double scale = seq.degree_product();
    CommandResult result;

    if (!config.entry.empty()) {
        if (config.trace_only) throw ValidationError("--entry and --trace are exclusive");
        const auto [i, j] = parse_entry(config.entry);
        ProductEstimate e;
        try {
            e = product_entry(seq, i, j, mode);
        } catch (const MatmulError& err) {
            throw ValidationError(err.what());
        }
        if (e.probability < -1e-12 || e.probability > 1.0 + 1e-12) {
            throw InvariantError("projection probability outside [0,1]");
        }
        const std::string format = resolve_format(config, "json");
        if (format == "json") {
            result.artifact = estimate_json(e).dump(2) + "\n";
        } else {
            result.artifact = "i,j,value\n" + std::to_string(i) + "," + std::to_string(j) + "," +
                              format_number(e.value) + "\n";
        }
        result.extension = format;
        result.summary = "C[" + std::to_string(i) + "," + std::to_string(j) + "] = " + format_number(e.value) +
                         " (probability " + format_number(e.probability) + ")";
        if (!e.precision_met) result.summary += "; warning: shot count too low to guarantee rounding";
        return result;
    }

    if (config.trace_only) {
        const double tr = product_trace(seq, mode);
        const std::string format = resolve_format(config, "json");
        if (format == "json") {
            ordered_json j;
            j["n"] = n;
            j["mode"] = mode.is_exact() ? "exact" : "shots";
            j["trace"] = tr;
            if (!mode.is_exact()) {
                j["shots"] = mode.shots;
                j["seed"] = mode.seed;
            }
            result.artifact = j.dump(2) + "\n";
        } else {
            result.artifact = "trace\n" + format_number(tr) + "\n";
        }
        result.extension = format;
        result.summary = "trace = " + format_number(tr);
        return result;
    }

    const std::vector<double> values = product_matrix(seq, mode);
    if (mode.is_exact()) {
        for (std::size_t j = 0; j < n; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) col += values[i * n + j];
            if (std::abs(col - scale) > 1e-9 * std::max(1.0, scale)) {
                throw InvariantError("column " + std::to_string(j) + " sums to " + format_number(col) +
                                     ", expected " + format_number(scale));
            }
        }
    }
    const std::string format = resolve_format(config, "csv");
    if (format == "json") {
        ordered_json j;
        j["n"] = n;
        j["mode"] = mode.is_exact() ? "exact" : "shots";
        auto rows = ordered_json::array();
        for (std::size_t i = 0; i < n; ++i) {
            rows.push_back(std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(i * n),
                                               values.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
        }
        j["values"] = std::move(rows);
        if (!mode.is_exact()) {
            j["shots"] = mode.shots;
            j["seed"] = mode.seed;
        }
        result.artifact = j.dump(2) + "\n";
    } else {
        std::ostringstream s;
        s << "i,j,value\n";
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s << i << "," << j << "," << format_number(values[i * n + j]) << "\n";
        result.artifact = s.str();
    }
    result.extension = format;
    result.summary = std::to_string(n) + "x" + std::to_string(n) + " product of " + std::to_string(seq.length()) +
                     " factor(s)";
    return result;
}

CommandResult cmd_triangles(const RunConfig& config) {
    if (config.power != 1) throw ValidationError("triangles does not take --power");
    RunConfig cube = config;
    cube.power = 3;
    const RegularGraphSequence seq = build_sequence(cube);
    if (config.graphs.size() != 1) throw ValidationError("triangles needs exactly one --graph");
    const EstimateMode mode = config.estimate_mode();
    const std::size_t n = seq.n();

    std::vector<std::size_t> vertices;
    if (config.vertex) {
        if (*config.vertex >= n) throw ValidationError("--vertex out of range");
        vertices.push_back(*config.vertex);
    } else {
        vertices.resize(n);
        std::iota(vertices.begin(), vertices.end(), std::size_t{0});
    }

    std::vector<ProductEstimate> diag(vertices.size());
    parallel_for(vertices.size(), [&](std::size_t k) {
        EstimateMode m = mode;
        if (!m.is_exact()) m.seed = entry_seed(mode.seed, vertices[k], vertices[k], n);
        diag[k] = product_entry(seq, vertices[k], vertices[k], m);
    });

    long long closed = 0;
    for (const auto& e : diag) {
        if (mode.is_exact() && e.rounded() % 2 != 0) {
            throw InvariantError("odd closed-walk count at vertex " + std::to_string(e.i));
        }
        closed += e.rounded();
    }
    if (!config.vertex && mode.is_exact() && closed % 6 != 0) {
        throw InvariantError("trace of A^3 is not divisible by 6");
    }
    const long long total = config.vertex ? closed / 2 : closed / 6;

    const std::string format = resolve_format(config, "json");
    CommandResult result;
    if (format == "json") {
        ordered_json j;
        j["n"] = n;
        j["mode"] = mode.is_exact() ? "exact" : "shots";
        if (config.vertex) {
            j["vertex"] = *config.vertex;
        }
        j["triangles"] = total;
        auto per = ordered_json::array();
        for (const auto& e : diag) {
            ordered_json v;
            v["vertex"] = e.i;
            v["probability"] = e.probability;
            v["closed_walks"] = e.value;
            v["triangles"] = e.rounded() / 2;
            per.push_back(std::move(v));
        }
        j["per_vertex"] = std::move(per);
        if (!mode.is_exact()) {
            j["shots"] = mode.shots;
            j["seed"] = mode.seed;
        }
        result.artifact = j.dump(2) + "\n";
    } else {
        std::ostringstream s;
        s << "vertex,closed_walks,triangles\n";
        for (const auto& e : diag) s << e.i << "," << format_number(e.value) << "," << e.rounded() / 2 << "\n";
        result.artifact = s.str();
    }
    result.extension = format;
    result.summary = config.vertex ? "triangles at vertex " + std::to_string(*config.vertex) + ": " +
                                         std::to_string(total)
                                   : "triangles: " + std::to_string(total);
    return result;
}

}  // namespace hqw::cli
