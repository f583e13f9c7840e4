#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sgsim/graph.hpp"

namespace sgsim {

using Json = nlohmann::json;

// Wire format: {"n": int, "edges": [[u, v, w], ...], "root": optional int,
// "coords": optional [[x, y], ...]}.
struct GraphDocument {
    Graph graph;
    std::optional<int> root;
    std::optional<std::vector<std::pair<int, int>>> coords;
};

inline Json graph_to_json(const Graph& g, std::optional<int> root = std::nullopt,
                          const std::optional<std::vector<std::pair<int, int>>>& coords = std::nullopt) {
    Json j;
    j["n"] = g.vertex_count();
    Json edges = Json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, e.w});
    j["edges"] = std::move(edges);
    if (root) j["root"] = *root;
    if (coords) {
        Json pts = Json::array();
        for (auto [x, y] : *coords) pts.push_back({x, y});
        j["coords"] = std::move(pts);
    }
    return j;
}

inline GraphDocument graph_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw std::invalid_argument("graph json: expected object with \"n\" and \"edges\"");
    GraphDocument doc;
    int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() < 2 || e.size() > 3)
            throw std::invalid_argument("graph json: edge must be [u, v] or [u, v, w]");
        double w = e.size() == 3 ? e.at(2).get<double>() : 1.0;
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>(), w);
    }
    doc.graph = Graph(n, std::move(edges));
    if (j.contains("root") && !j.at("root").is_null()) doc.root = j.at("root").get<int>();
    if (j.contains("coords") && !j.at("coords").is_null()) {
        std::vector<std::pair<int, int>> pts;
        for (const auto& p : j.at("coords")) pts.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        doc.coords = std::move(pts);
    }
    return doc;
}

inline Json read_json_file(const std::string& path) {
    if (path == "-") return Json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return Json::parse(in);
}

inline GraphDocument read_graph_file(const std::string& path) {
    return graph_from_json(read_json_file(path));
}

}  // namespace sgsim
