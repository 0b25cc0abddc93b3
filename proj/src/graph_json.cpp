#include "hqw/graph.hpp"

#include <json.hpp>

namespace hqw {

using nlohmann::json;

LabeledGraph load_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw GraphError(std::string("graph JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("labels") ||
        !doc.contains("edges")) {
        throw GraphError("graph JSON: expected object with \"n\", \"labels\", \"edges\"");
    }
    try {
        const auto n = doc.at("n").get<std::int64_t>();
        if (n < 0) throw GraphError("graph JSON: negative vertex count");
        LabeledGraph g(static_cast<std::size_t>(n),
                       doc.at("labels").get<std::vector<std::string>>());
        if (g.labels().size() != doc.at("labels").size()) {
            throw GraphError("graph JSON: duplicate labels");
        }
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() < 3 || e.size() > 4) {
                throw GraphError("graph JSON: edge must be [u, v, label, weight?]");
            }
            const auto u = e[0].get<std::int64_t>();
            const auto v = e[1].get<std::int64_t>();
            if (u < 0 || v < 0) throw GraphError("graph JSON: negative vertex id");
            const double w = e.size() == 4 ? e[3].get<double>() : 1.0;
            g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v),
                       e[2].get<std::string>(), w);
        }
        if (doc.contains("coordinates")) {
            g.set_coordinates(doc.at("coordinates").get<std::vector<double>>());
        }
        return g;
    } catch (const json::exception& e) {
        throw GraphError(std::string("graph JSON: ") + e.what());
    }
}

std::string save_json(const LabeledGraph& g) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    doc["n"] = g.vertex_count();
    doc["labels"] = g.labels();
    auto edges = nlohmann::ordered_json::array();
    for (const Edge& e : g.edges()) {
        edges.push_back(nlohmann::ordered_json::array({e.u, e.v, e.label, e.weight}));
    }
    doc["edges"] = std::move(edges);
    if (g.has_coordinates()) doc["coordinates"] = g.coordinates();
    return doc.dump();
}

}  // namespace hqw
