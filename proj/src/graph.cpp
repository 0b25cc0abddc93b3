#include "hqw/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>

namespace hqw {

LabeledGraph::LabeledGraph(std::size_t n, std::vector<std::string> labels) : n_(n) {
    for (auto& l : labels) {
        if (has_label(l)) throw GraphError("duplicate label '" + l + "'");
        labels_.push_back(std::move(l));
    }
}

void LabeledGraph::add_label(const std::string& label) {
    if (!has_label(label)) labels_.push_back(label);
}

bool LabeledGraph::has_label(std::string_view label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t LabeledGraph::label_index(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw GraphError("unknown label '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

void LabeledGraph::add_edge(std::size_t u, std::size_t v, const std::string& label,
                            double weight) {
    if (u >= n_ || v >= n_) {
        throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                         ") out of range for n=" + std::to_string(n_));
    }
    if (!has_label(label)) throw GraphError("edge label '" + label + "' not in label set");
    if (find_edge(u, v, label)) {
        throw GraphError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) +
                         ") with label '" + label + "'");
    }
    edges_.push_back(Edge{u, v, label, weight});
}

std::optional<std::size_t> LabeledGraph::find_edge(std::size_t u, std::size_t v,
                                                   std::string_view label) const {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.label != label) continue;
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return i;
    }
    return std::nullopt;
}

std::vector<const Edge*> LabeledGraph::incident(std::size_t v) const {
    std::vector<const Edge*> out;
    for (const Edge& e : edges_)
        if (!e.is_loop() && e.touches(v)) out.push_back(&e);
    return out;
}

std::vector<double> LabeledGraph::coordinates() const {
    if (!coords_.empty()) return coords_;
    std::vector<double> ids(n_);
    std::iota(ids.begin(), ids.end(), 0.0);
    return ids;
}

void LabeledGraph::set_coordinates(std::vector<double> coords) {
    if (!coords.empty() && coords.size() != n_) {
        throw GraphError("coordinate map must have one entry per vertex");
    }
    coords_ = std::move(coords);
}

// ---------------------------------------------------------------------------

SubgraphAdjacency subgraph_adjacency(const LabeledGraph& g, std::string_view label) {
    if (!g.has_label(label)) throw GraphError("unknown label '" + std::string(label) + "'");
    const std::size_t n = g.vertex_count();
    ComplexMatrix m(n, n);
    for (const Edge& e : g.edges()) {
        if (e.label != label) continue;
        if (e.is_loop()) {
            m(e.u, e.u) += e.weight;
        } else {
            m(e.u, e.v) += e.weight;
            m(e.v, e.u) += e.weight;
        }
    }
    return {std::string(label), std::move(m)};
}

ComplexMatrix adjacency_matrix(const LabeledGraph& g) {
    const std::size_t n = g.vertex_count();
    ComplexMatrix m(n, n);
    for (const Edge& e : g.edges()) {
        if (e.is_loop()) {
            m(e.u, e.u) += e.weight;
        } else {
            m(e.u, e.v) += e.weight;
            m(e.v, e.u) += e.weight;
        }
    }
    return m;
}

ColoringReport validate_proper_coloring(const LabeledGraph& g) {
    ColoringReport report;
    const auto& edges = g.edges();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (edges[i].is_loop() || !edges[i].touches(v)) continue;
            for (std::size_t j = i + 1; j < edges.size(); ++j) {
                if (edges[j].is_loop() || !edges[j].touches(v)) continue;
                if (edges[i].label == edges[j].label) {
                    report.violations.push_back({v, edges[i].label, i, j});
                }
            }
        }
    }
    report.proper = report.violations.empty();
    return report;
}

std::string RegularityReport::describe() const {
    std::ostringstream os;
    if (degree) {
        os << "regular of degree " << *degree;
        return os.str();
    }
    os << "not regular; degrees:";
    for (std::size_t v = 0; v < degrees.size(); ++v) os << " " << v << ":" << degrees[v];
    return os.str();
}

RegularityReport validate_regular(const LabeledGraph& g) {
    RegularityReport report;
    report.degrees.assign(g.vertex_count(), 0);
    for (const Edge& e : g.edges()) {
        if (e.is_loop()) continue;
        ++report.degrees[e.u];
        ++report.degrees[e.v];
    }
    if (!report.degrees.empty() &&
        std::all_of(report.degrees.begin(), report.degrees.end(),
                    [&](std::size_t d) { return d == report.degrees.front(); })) {
        report.degree = report.degrees.front();
    }
    return report;
}

std::vector<std::string> path_colors(const LabeledGraph& g, const std::vector<std::size_t>& path) {
    std::vector<std::string> colors;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const std::size_t u = path[k];
        const std::size_t v = path[k + 1];
        std::vector<std::string> found;
        for (const Edge& e : g.edges()) {
            if (e.is_loop()) continue;
            if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) found.push_back(e.label);
        }
        if (found.empty()) {
            throw GraphError("path vertices " + std::to_string(u) + " and " + std::to_string(v) +
                             " are not adjacent");
        }
        if (found.size() > 1) {
            throw GraphError("ambiguous path edge (" + std::to_string(u) + "," +
                             std::to_string(v) + ") carries several labels");
        }
        colors.push_back(found.front());
    }
    return colors;
}

std::vector<std::size_t> shortest_path(const LabeledGraph& g, std::size_t from, std::size_t to) {
    const std::size_t n = g.vertex_count();
    if (from >= n || to >= n) throw GraphError("shortest_path: vertex out of range");
    std::vector<std::vector<std::size_t>> adj(n);
    for (const Edge& e : g.edges()) {
        if (e.is_loop()) continue;
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(n, kNone);
    std::deque<std::size_t> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        if (u == to) break;
        for (std::size_t v : adj[u]) {
            if (parent[v] != kNone) continue;
            parent[v] = u;
            queue.push_back(v);
        }
    }
    if (parent[to] == kNone) return {};
    std::vector<std::size_t> path{to};
    while (path.back() != from) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

bool is_connected(const LabeledGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n == 0) return true;
    for (std::size_t v = 1; v < n; ++v)
        if (shortest_path(g, 0, v).empty()) return false;
    return true;
}

// ---------------------------------------------------------------------------

namespace build {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw GraphError(what);
}

std::vector<std::string> numbered_labels(std::size_t count) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < count; ++i) labels.push_back(std::to_string(i));
    return labels;
}

}  // namespace

LabeledGraph circle2(double a, double b) {
    LabeledGraph g(2, {"0", "1"});
    g.add_edge(0, 1, "0", a);
    g.add_edge(0, 1, "1", b);
    return g;
}

LabeledGraph star(std::size_t n) {
    require(n >= 2, "star: need N >= 2");
    LabeledGraph g(n, numbered_labels(n));
    for (std::size_t j = 1; j < n; ++j) g.add_edge(0, j, std::to_string(j));
    return g;
}

LabeledGraph line(std::size_t half_length, std::size_t period) {
    require(half_length >= 1, "line: half-length must be >= 1");
    require(period >= 1, "line: label period must be >= 1");
    const std::size_t n = 2 * half_length + 1;
    LabeledGraph g(n, numbered_labels(period));
    for (std::size_t k = 0; k + 1 < n; ++k) g.add_edge(k, k + 1, std::to_string(k % period));
    std::vector<double> coords(n);
    for (std::size_t k = 0; k < n; ++k)
        coords[k] = static_cast<double>(k) - static_cast<double>(half_length);
    g.set_coordinates(std::move(coords));
    return g;
}

LabeledGraph line2(std::size_t half_length) { return line(half_length, 2); }
LabeledGraph line3(std::size_t half_length) { return line(half_length, 3); }

LabeledGraph segment_line(std::size_t m) {
    require(m >= 2, "segment_line: need M >= 2");
    LabeledGraph g(m, {"r", "b"});
    for (std::size_t k = 1; k < m; ++k) g.add_edge(k - 1, k, k % 2 == 1 ? "b" : "r");
    std::vector<double> coords(m);
    std::iota(coords.begin(), coords.end(), 1.0);
    g.set_coordinates(std::move(coords));
    return g;
}

LabeledGraph fock_g0(std::size_t n_max, double g) {
    require(n_max >= 1, "fock_g0: truncation must be >= 1");
    LabeledGraph graph(n_max + 1, {"0", "1"});
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double w = g * static_cast<double>(n) / 2.0;
        graph.add_edge(n, n, "0", w);
        graph.add_edge(n, n, "1", -w);
    }
    return graph;
}

LabeledGraph fock_g0p(std::size_t n_max) {
    require(n_max >= 1, "fock_g0p: truncation must be >= 1");
    const std::size_t side = n_max + 1;
    LabeledGraph graph(side * side, {"0", "1"});
    for (std::size_t n = 0; n < side; ++n)
        for (std::size_t m = 0; m < side; ++m) {
            const double w = static_cast<double>(n + m + 1) / 2.0;
            graph.add_edge(n * side + m, n * side + m, "0", w);
            graph.add_edge(n * side + m, n * side + m, "1", -w);
        }
    return graph;
}

LabeledGraph cycle(std::size_t n) {
    require(n >= 3, "cycle: need n >= 3");
    LabeledGraph g(n, {"0"});
    for (std::size_t k = 0; k < n; ++k) g.add_edge(k, (k + 1) % n, "0");
    return g;
}

LabeledGraph complete(std::size_t n) {
    require(n >= 2, "complete: need n >= 2");
    LabeledGraph g(n, {"0"});
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v, "0");
    return g;
}

LabeledGraph from_edges(std::size_t n,
                        const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    LabeledGraph g(n, {"0"});
    for (auto [u, v] : edges) g.add_edge(u, v, "0");
    return g;
}

LabeledGraph benchmark8() {
    return from_edges(8, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 4}, {2, 5},
                          {4, 6}, {4, 7}, {5, 6}, {5, 7}, {3, 6}, {3, 7}});
}

LabeledGraph colored_tree(std::size_t n) {
    require(n >= 2, "colored_tree: need n >= 2");
    LabeledGraph g(n, {"0", "1", "2"});
    // parent_color[v] is the label on the edge to v's parent; root has none.
    std::vector<int> parent_color(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
        int next = 0;
        for (std::size_t child : {2 * v + 1, 2 * v + 2}) {
            if (child >= n) break;
            if (next == parent_color[v]) ++next;
            g.add_edge(v, child, std::to_string(next));
            parent_color[child] = next;
            ++next;
        }
    }
    return g;
}

LabeledGraph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
    require(d >= 1 && d < n, "random_regular: need 1 <= d < n");
    require((n * d) % 2 == 0, "random_regular: n*d must be even");
    std::mt19937_64 rng(seed);
    // Pairing model with restarts; fine for the small sizes used here.
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<std::size_t> stubs;
        for (std::size_t v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        bool ok = true;
        for (std::size_t i = 0; i < stubs.size() && ok; i += 2) {
            auto u = std::min(stubs[i], stubs[i + 1]);
            auto v = std::max(stubs[i], stubs[i + 1]);
            if (u == v || std::find(edges.begin(), edges.end(), std::pair{u, v}) != edges.end()) {
                ok = false;
            }
            edges.emplace_back(u, v);
        }
        if (ok) return from_edges(n, edges);
    }
    throw GraphError("random_regular: no simple pairing found");
}

}  // namespace build

}  // namespace hqw
