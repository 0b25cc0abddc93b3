// Labeled, weighted undirected graphs and the builders for every graph family
// the walks run on.

#pragma once

#include "hqw/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hqw {

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    std::string label;
    double weight = 1.0;

    bool is_loop() const noexcept { return u == v; }
    bool touches(std::size_t x) const noexcept { return u == x || v == x; }
    std::size_t other(std::size_t x) const noexcept { return u == x ? v : u; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

class LabeledGraph {
public:
    LabeledGraph() = default;
    LabeledGraph(std::size_t n, std::vector<std::string> labels);

    /// Throws GraphError on out-of-range ids, unknown labels, or a duplicate
    /// (unordered pair, label).
    void add_edge(std::size_t u, std::size_t v, const std::string& label, double weight = 1.0);
    /// Appends a label to the ordered label set; no-op if already present.
    void add_label(const std::string& label);

    std::size_t vertex_count() const noexcept { return n_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    bool has_label(std::string_view label) const;
    /// Position of `label` in the ordered label set; throws GraphError if absent.
    std::size_t label_index(std::string_view label) const;

    /// Non-loop edges incident to v.
    std::vector<const Edge*> incident(std::size_t v) const;
    std::optional<std::size_t> find_edge(std::size_t u, std::size_t v, std::string_view label) const;

    /// Signed display coordinate per vertex; vertex ids when no map was set.
    std::vector<double> coordinates() const;
    void set_coordinates(std::vector<double> coords);
    bool has_coordinates() const noexcept { return !coords_.empty(); }

    friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::vector<double> coords_;
};

struct SubgraphAdjacency {
    std::string label;
    ComplexMatrix matrix;
};

/// Weighted adjacency of the label-`label` edges; self-loop weight lands once
/// on the diagonal.
SubgraphAdjacency subgraph_adjacency(const LabeledGraph& g, std::string_view label);

/// Full weighted adjacency (sum over all labels).
ComplexMatrix adjacency_matrix(const LabeledGraph& g);

struct ColoringViolation {
    std::size_t vertex;
    std::string label;
    std::size_t edge1;  // indices into edges()
    std::size_t edge2;
};

struct ColoringReport {
    bool proper = true;
    std::vector<ColoringViolation> violations;
};

ColoringReport validate_proper_coloring(const LabeledGraph& g);

struct RegularityReport {
    std::optional<std::size_t> degree;  // set iff regular
    std::vector<std::size_t> degrees;
    bool regular() const noexcept { return degree.has_value(); }
    std::string describe() const;
};

/// Label-agnostic degree count, self-loops excluded.
RegularityReport validate_regular(const LabeledGraph& g);

/// Label of each consecutive path edge. Throws GraphError for non-adjacent
/// pairs or when two labels join the same pair.
std::vector<std::string> path_colors(const LabeledGraph& g, const std::vector<std::size_t>& path);

/// BFS shortest path over non-loop edges; empty when unreachable.
std::vector<std::size_t> shortest_path(const LabeledGraph& g, std::size_t from, std::size_t to);

bool is_connected(const LabeledGraph& g);

LabeledGraph load_json(std::string_view text);
std::string save_json(const LabeledGraph& g);

namespace build {

/// Two vertices joined by label "0" (weight a) and label "1" (weight b).
LabeledGraph circle2(double a, double b);
/// Center 0, edge (0,j) labeled "j"; label "0" stays in the label set unused.
LabeledGraph star(std::size_t n);
/// Path on 2L+1 vertices, edge (k,k+1) labeled k mod 2. Coordinates -L..L.
LabeledGraph line2(std::size_t half_length);
/// Same with labels cycling with period 3.
LabeledGraph line3(std::size_t half_length);
LabeledGraph line(std::size_t half_length, std::size_t period);
/// Vertices 1..M (ids 0..M-1); segment (k,k+1) is "b" for odd k, "r" for even k.
LabeledGraph segment_line(std::size_t m);
/// Fock lattice n=0..n_max, self-loops +-g n/2 under labels "0"/"1".
LabeledGraph fock_g0(std::size_t n_max, double g);
/// Two-mode lattice (n,m), id n*(n_max+1)+m, self-loops +-(n+m+1)/2.
LabeledGraph fock_g0p(std::size_t n_max);
/// Single-label cycle C_n.
LabeledGraph cycle(std::size_t n);
/// Single-label complete graph K_n.
LabeledGraph complete(std::size_t n);
/// Single-label graph from an undirected edge list.
LabeledGraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);
/// 8-vertex 3-regular graph in which vertex 0 lies in exactly one triangle.
LabeledGraph benchmark8();
/// Heap-shaped tree (parent of v is (v-1)/2) greedily edge-colored with labels "0","1","2".
LabeledGraph colored_tree(std::size_t n);
/// Random simple d-regular graph on n vertices, single label.
LabeledGraph random_regular(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace build

}  // namespace hqw
