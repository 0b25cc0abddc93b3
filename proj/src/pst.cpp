#include "hqw/pst.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hqw {

namespace {

/// Swap of coin indices a <-> b, identity elsewhere.
ComplexMatrix swap_coin(std::size_t dim, std::size_t a, std::size_t b) {
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m(a, a) = 0.0;
    m(b, b) = 0.0;
    m(a, b) = 1.0;
    m(b, a) = 1.0;
    return m;
}

LabeledGraph with_primed_labels(const PstPlan& plan) {
    LabeledGraph g = plan.graph;
    for (const auto& p : plan.primed) g.add_label(p);
    return g;
}

cplx i_power(std::size_t m) {
    static constexpr cplx kCycle[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kCycle[m % 4];
}

}  // namespace

PstPlan make_pst_plan(const LabeledGraph& g, std::size_t source, std::size_t target,
                      std::vector<std::size_t> path) {
    const std::size_t n = g.vertex_count();
    if (source >= n || target >= n) throw PstError("PST endpoints out of range");
    if (source == target) throw PstError("PST needs distinct endpoints");

    const ColoringReport coloring = validate_proper_coloring(g);
    if (!coloring.proper) {
        const auto& v = coloring.violations.front();
        throw PstError("improper coloring: vertex " + std::to_string(v.vertex) +
                       " has two edges labeled '" + v.label + "'");
    }

    PstPlan plan;
    plan.graph = g;
    plan.colors = g.labels();
    for (const auto& c : plan.colors) {
        std::string primed = c + std::string(kPrimeSuffix);
        if (g.has_label(primed)) throw PstError("primed label '" + primed + "' collides with a color");
        plan.primed.push_back(std::move(primed));
    }
    plan.source = source;
    plan.target = target;

    if (path.empty()) {
        path = shortest_path(g, source, target);
        if (path.empty()) {
            throw PstError("vertices " + std::to_string(source) + " and " +
                           std::to_string(target) + " are disconnected");
        }
    }
    if (path.size() < 2 || path.front() != source || path.back() != target) {
        throw PstError("path must run from source to target");
    }
    std::vector<std::string> labels;
    try {
        labels = path_colors(g, path);
    } catch (const GraphError& e) {
        throw PstError(e.what());
    }
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const auto idx = g.find_edge(path[k], path[k + 1], labels[k]);
        if (g.edges()[*idx].weight != 1.0) {
            throw PstError("path edge (" + std::to_string(path[k]) + "," +
                           std::to_string(path[k + 1]) + ") must have unit weight");
        }
    }
    for (const Edge& e : g.edges()) {
        if (!e.is_loop()) continue;
        if (std::find(path.begin(), path.end(), e.u) != path.end()) {
            throw PstError("self-loop on path vertex " + std::to_string(e.u));
        }
    }
    for (const auto& l : labels) plan.path_color_index.push_back(g.label_index(l));
    plan.path = std::move(path);
    return plan;
}

PstOperators build_operators(const PstPlan& plan) {
    const std::size_t big_n = plan.colors_count();
    const std::size_t dim = plan.coin_dim();
    const auto& ic = plan.path_color_index;
    if (ic.empty()) throw PstError("empty path");
    for (std::size_t k = 0; k + 1 < ic.size(); ++k) {
        if (ic[k] == ic[k + 1]) {
            throw PstError("coloring violation: consecutive path edges share color '" +
                           plan.colors[ic[k]] + "'");
        }
    }

    PstOperators ops;
    ops.prepare = ComplexMatrix(dim, dim);
    for (std::size_t i = 0; i < big_n; ++i) {
        ops.prepare(i, big_n + i) = 1.0;
        ops.prepare(big_n + i, i) = 1.0;
    }
    for (std::size_t k = 0; k + 1 < ic.size(); ++k) ops.relay.push_back(swap_coin(dim, ic[k], ic[k + 1]));
    for (std::size_t l = 0; l < big_n; ++l) {
        ops.depart.push_back(swap_coin(dim, ic.front(), big_n + l));
        ops.arrive.push_back(swap_coin(dim, ic.back(), big_n + l));
    }

    auto check = [](const ComplexMatrix& m, const char* name) {
        if (!m.is_unitary(1e-12)) throw PstError(std::string("operator ") + name + " is not unitary");
    };
    check(ops.prepare, "P");
    for (const auto& m : ops.relay) check(m, "C_k");
    for (const auto& m : ops.depart) check(m, "D_l");
    for (const auto& m : ops.arrive) check(m, "E_l");
    return ops;
}

PstResult run_pst(const PstPlan& plan, std::span<const cplx> alpha) {
    const std::size_t big_n = plan.colors_count();
    if (alpha.size() != big_n) {
        throw PstError("alpha has " + std::to_string(alpha.size()) + " entries, expected " +
                       std::to_string(big_n));
    }
    double norm2 = 0.0;
    for (const auto& a : alpha) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-10) throw PstError("alpha is not normalized");

    const PstOperators ops = build_operators(plan);
    const HybridWalk walk(with_primed_labels(plan), CoinSpec::identity());
    const std::size_t n = walk.pos_dim();
    const std::size_t m = plan.path_length();
    const std::size_t a = plan.source;
    const std::size_t b = plan.target;

    std::vector<cplx> coin(plan.coin_dim());
    std::copy(alpha.begin(), alpha.end(), coin.begin());

    PstResult result;
    PstTranscript& tr = result.transcript;
    StateVector psi = walk.initial_state(coin, a);
    tr.stages.push_back({"initial", psi});
    psi = walk.apply_coin(ops.prepare, psi);
    tr.stages.push_back({"prepare", psi});

    std::vector<StepOperator> relay;
    for (const auto& c : ops.relay) relay.push_back(walk.step_operator(kPstStepTime, c));

    for (std::size_t l = 0; l < big_n; ++l) {
        const std::string tag = "iteration " + std::to_string(l + 1);
        psi = walk.step_with_coin(kPstStepTime, ops.depart[l], psi);
        tr.stages.push_back({tag + ": walk 1", psi});
        for (std::size_t k = 0; k < relay.size(); ++k) {
            psi = relay[k].apply(psi);
            tr.stages.push_back({tag + ": walk " + std::to_string(k + 2), psi});
        }
        psi = walk.apply_coin(ops.arrive[l], psi);
        tr.stages.push_back({tag + ": arrive", psi});

        std::vector<cplx> ideal(walk.dim());
        for (std::size_t i = 0; i < big_n; ++i) {
            if (i <= l) {
                ideal[(big_n + i) * n + b] = i_power(m) * alpha[i];
            } else {
                ideal[(big_n + i) * n + a] = alpha[i];
            }
        }
        tr.iteration_fidelity.push_back(fidelity(StateVector(std::move(ideal)), psi));
    }
    psi = walk.apply_coin(ops.prepare, psi);
    tr.stages.push_back({"final", psi});

    for (std::size_t i = 0; i < big_n; ++i) {
        if (std::abs(alpha[i]) > 1e-12) tr.phases.push_back(psi[i * n + b] / alpha[i]);
    }
    tr.fidelity = verify_pst(psi, alpha, b, n);
    result.final_state = std::move(psi);
    return result;
}

double verify_pst(const StateVector& final_state, std::span<const cplx> alpha, std::size_t target,
                  std::size_t pos_dim) {
    if (pos_dim == 0 || final_state.dim() % pos_dim != 0 || target >= pos_dim) {
        throw DimensionError("verify_pst: state does not factor over the given position space");
    }
    const std::size_t coin_dim = final_state.dim() / pos_dim;
    if (alpha.size() > coin_dim) throw DimensionError("verify_pst: alpha longer than coin space");
    std::vector<cplx> ideal(final_state.dim());
    for (std::size_t i = 0; i < alpha.size(); ++i) ideal[i * pos_dim + target] = alpha[i];
    return fidelity(StateVector(std::move(ideal)), final_state);
}

std::string transcript_json(const PstPlan& plan, const PstTranscript& transcript) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["source"] = plan.source;
    doc["target"] = plan.target;
    doc["path"] = plan.path;
    std::vector<std::string> path_labels;
    for (auto i : plan.path_color_index) path_labels.push_back(plan.colors[i]);
    doc["path_colors"] = path_labels;
    std::vector<std::string> coin_labels = plan.colors;
    coin_labels.insert(coin_labels.end(), plan.primed.begin(), plan.primed.end());
    doc["coin_labels"] = coin_labels;

    const std::size_t n = plan.graph.vertex_count();
    auto stages = ordered_json::array();
    for (const auto& st : transcript.stages) {
        auto amps = ordered_json::array();
        for (std::size_t idx = 0; idx < st.state.dim(); ++idx) {
            const cplx z = st.state[idx];
            if (std::abs(z) < 1e-12) continue;
            amps.push_back(ordered_json::array({coin_labels[idx / n], idx % n, z.real(), z.imag()}));
        }
        stages.push_back(ordered_json{{"name", st.name}, {"norm", st.state.norm()}, {"amplitudes", amps}});
    }
    doc["stages"] = std::move(stages);
    doc["iteration_fidelity"] = transcript.iteration_fidelity;
    auto phases = ordered_json::array();
    for (const auto& p : transcript.phases) phases.push_back(ordered_json::array({p.real(), p.imag()}));
    doc["phases"] = std::move(phases);
    doc["fidelity"] = transcript.fidelity;
    return doc.dump(2);
}

SegmentTransfer segment_line_transfer(std::size_t m) {
    if (m < 2) throw PstError("segment_line_transfer: need M >= 2");
    const LabeledGraph g = build::segment_line(m);
    const HybridWalk walk(g, CoinSpec::identity());
    const std::size_t r = g.label_index("r");
    const std::size_t b = g.label_index("b");
    const ComplexMatrix identity = ComplexMatrix::identity(2);
    const ComplexMatrix swap = ComplexMatrix::transposition(2, r, b);

    SegmentTransfer out;
    out.m = m;
    std::vector<cplx> coin(2);
    coin[b] = 1.0;
    StateVector psi = walk.initial_state(coin, 0);
    out.states.push_back(psi);
    for (std::size_t k = 1; k < m; ++k) {
        const bool first = k == 1;
        psi = walk.step_with_coin(std::numbers::pi / 2.0, first ? identity : swap, psi);
        out.coins.push_back(first ? "I" : "swap");
        double pr = 0.0;
        for (std::size_t v = 0; v < m; ++v) pr += std::norm(psi[r * m + v]);
        out.active.push_back(pr > 0.5 ? "r" : "b");
        out.states.push_back(psi);
    }
    out.arrival_probability = position_distribution(psi, 2, m).back();
    return out;
}

}  // namespace hqw
