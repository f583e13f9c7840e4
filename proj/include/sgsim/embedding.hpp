#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "sgsim/graph.hpp"

namespace sgsim {

// Unique-path embedding of one tree into another on the same vertex ids.
struct TreeEmbedding {
    Graph demand;                          // G: edges to route
    Graph host;                            // H: tree carrying the routes
    std::vector<std::vector<Edge>> routes; // per demand edge, the host path as edges
    std::vector<int> host_congestion;      // per host edge (aligned with host.edges())
};

namespace detail {
inline std::map<std::pair<int, int>, int> edge_index(const Graph& g) {
    std::map<std::pair<int, int>, int> idx;
    for (int i = 0; i < g.edge_count(); ++i)
        idx[{g.edges()[i].u, g.edges()[i].v}] = i;
    return idx;
}

// Path between u and v in a rooted tree, as a list of edges (walk to the LCA).
inline std::vector<Edge> tree_path(const RootedTree& t, int u, int v) {
    std::vector<Edge> up, down;
    int a = u, b = v;
    while (t.depth(a) > t.depth(b)) {
        up.emplace_back(a, t.parent(a));
        a = t.parent(a);
    }
    while (t.depth(b) > t.depth(a)) {
        down.emplace_back(b, t.parent(b));
        b = t.parent(b);
    }
    while (a != b) {
        up.emplace_back(a, t.parent(a));
        down.emplace_back(b, t.parent(b));
        a = t.parent(a);
        b = t.parent(b);
    }
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}
}  // namespace detail

inline TreeEmbedding embed(const Graph& demand, const Graph& host) {
    if (!is_tree(demand) || !is_tree(host)) throw std::invalid_argument("embed: both graphs must be trees");
    if (demand.vertex_count() != host.vertex_count())
        throw std::invalid_argument("embed: vertex sets must match");
    TreeEmbedding emb{demand, host, {}, std::vector<int>(host.edge_count(), 0)};
    RootedTree rooted(host, 0);
    auto idx = detail::edge_index(host);
    for (const Edge& e : demand.edges()) {
        auto route = detail::tree_path(rooted, e.u, e.v);
        for (const Edge& he : route) ++emb.host_congestion[idx.at({he.u, he.v})];
        emb.routes.push_back(std::move(route));
    }
    return emb;
}

// Longest route, in host edges.
inline int dilation(const TreeEmbedding& emb) {
    int d = 0;
    for (const auto& r : emb.routes) d = std::max(d, static_cast<int>(r.size()));
    return d;
}

// Most-loaded host edge.
inline int congestion(const TreeEmbedding& emb) {
    int c = 0;
    for (int x : emb.host_congestion) c = std::max(c, x);
    return c;
}

// congestion * dilation bounds sigma(demand, host) from above.
inline double support_upper_bound(const TreeEmbedding& emb) {
    return static_cast<double>(congestion(emb)) * static_cast<double>(dilation(emb));
}

// ell: max stretch of a G-edge in H. k: max number of G-edges crossing a
// single-H-edge cut. max{k, ell} <= sigma(G,H) <= k*ell.
struct StretchCutProfile {
    int ell = 0;
    int k = 0;
};

inline StretchCutProfile stretch_cut_profile(const Graph& g, const Graph& h) {
    if (!is_tree(g) || !is_tree(h))
        throw std::invalid_argument("stretch_cut_profile: both graphs must be trees");
    if (g.vertex_count() != h.vertex_count())
        throw std::invalid_argument("stretch_cut_profile: vertex sets must match");
    StretchCutProfile p;
    for (const Edge& e : g.edges()) p.ell = std::max(p.ell, tree_distance(h, e.u, e.v));
    RootedTree rooted(h, 0);
    for (const Edge& e : h.edges())
        p.k = std::max(p.k, cut_size(g, rooted.subtree_under_edge(e)));
    return p;
}

// The four bound conditions a tree-alignment mapping must satisfy, checked
// directly: edge stretch at most ell in both directions, and at most k edges
// crossing the image of every single-edge cut, again in both directions.
inline bool mapping_respects_bounds(const Graph& g, const Graph& h, const std::vector<int>& image,
                                    int k, int ell) {
    if (!is_tree(g) || !is_tree(h) || g.vertex_count() != h.vertex_count())
        throw std::invalid_argument("mapping_respects_bounds: expects trees on matching vertex sets");
    const int n = g.vertex_count();
    if (static_cast<int>(image.size()) != n)
        throw std::invalid_argument("mapping_respects_bounds: mapping is not a full bijection");
    std::vector<int> pre(n, -1);
    for (int u = 0; u < n; ++u) {
        if (image[u] < 0 || image[u] >= n || pre[image[u]] != -1)
            throw std::invalid_argument("mapping_respects_bounds: mapping is not a full bijection");
        pre[image[u]] = u;
    }
    for (const Edge& e : g.edges())
        if (tree_distance(h, image[e.u], image[e.v]) > ell) return false;
    for (const Edge& e : h.edges())
        if (tree_distance(g, pre[e.u], pre[e.v]) > ell) return false;
    RootedTree gr(g, 0);
    for (const Edge& e : g.edges()) {
        std::vector<int> side;
        for (int v : gr.subtree_under_edge(e)) side.push_back(image[v]);
        if (cut_size(h, side) > k) return false;
    }
    RootedTree hr(h, 0);
    for (const Edge& e : h.edges()) {
        std::vector<int> side;
        for (int v : hr.subtree_under_edge(e)) side.push_back(pre[v]);
        if (cut_size(g, side) > k) return false;
    }
    return true;
}

inline bool mapping_respects_bounds(const Graph& g, const Graph& h, const VertexMapping& pi,
                                    int k, int ell) {
    return mapping_respects_bounds(g, h, pi.forward(), k, ell);
}

}  // namespace sgsim
