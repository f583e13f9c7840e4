#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sgsim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Undirected weighted edge, stored with u < v.
struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;

    Edge() = default;
    Edge(int a, int b, double weight = 1.0) : u(std::min(a, b)), v(std::max(a, b)), w(weight) {}

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.u == b.u && a.v == b.v && a.w == b.w;
    }
    friend bool operator<(const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    }
};

// Immutable undirected graph on vertex ids [0, n). No self-loops, no parallel
// edges, strictly positive weights. Transformations build new graphs.
class Graph {
public:
    Graph() = default;

    Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n_ < 0) throw std::invalid_argument("graph: negative vertex count");
        std::sort(edges_.begin(), edges_.end());
        adj_.assign(n_, {});
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            if (e.u < 0 || e.v >= n_) throw std::invalid_argument("graph: vertex id out of range");
            if (e.u == e.v) throw std::invalid_argument("graph: self-loop");
            if (!(e.w > 0.0)) throw std::invalid_argument("graph: non-positive edge weight");
            if (i > 0 && edges_[i - 1].u == e.u && edges_[i - 1].v == e.v)
                throw std::invalid_argument("graph: duplicate edge");
            adj_[e.u].push_back({e.v, e.w});
            adj_[e.v].push_back({e.u, e.w});
        }
        for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    }

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    // Sorted (neighbor, weight) pairs.
    const std::vector<std::pair<int, double>>& neighbors(int v) const { return adj_.at(v); }

    int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        const auto& nb = adj_.at(u);
        auto it = std::lower_bound(nb.begin(), nb.end(), std::make_pair(v, 0.0));
        return it != nb.end() && it->first == v;
    }

    double edge_weight(int u, int v) const {
        const auto& nb = adj_.at(u);
        auto it = std::lower_bound(nb.begin(), nb.end(), std::make_pair(v, 0.0));
        if (it == nb.end() || it->first != v) throw std::invalid_argument("graph: no such edge");
        return it->second;
    }

    bool unit_weights() const {
        return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w == 1.0; });
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
};

inline std::vector<int> connected_component_labels(const Graph& g) {
    std::vector<int> comp(g.vertex_count(), -1);
    int label = 0;
    for (int s = 0; s < g.vertex_count(); ++s) {
        if (comp[s] >= 0) continue;
        std::queue<int> q;
        q.push(s);
        comp[s] = label;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (auto [y, w] : g.neighbors(x))
                if (comp[y] < 0) {
                    comp[y] = label;
                    q.push(y);
                }
        }
        ++label;
    }
    return comp;
}

inline int connected_component_count(const Graph& g) {
    auto lab = connected_component_labels(g);
    return lab.empty() ? 0 : 1 + *std::max_element(lab.begin(), lab.end());
}

inline bool is_connected(const Graph& g) {
    return g.vertex_count() <= 1 || connected_component_count(g) == 1;
}

inline bool is_tree(const Graph& g) {
    return g.vertex_count() >= 1 && g.edge_count() == g.vertex_count() - 1 && is_connected(g);
}

inline int max_degree(const Graph& g) {
    int d = 0;
    for (int v = 0; v < g.vertex_count(); ++v) d = std::max(d, g.degree(v));
    return d;
}

// L(i,j) = -w_ij off-diagonal, weighted degree on the diagonal.
inline Matrix laplacian(const Graph& g) {
    const int n = g.vertex_count();
    Matrix l = Matrix::Zero(n, n);
    for (const Edge& e : g.edges()) {
        l(e.u, e.v) -= e.w;
        l(e.v, e.u) -= e.w;
        l(e.u, e.u) += e.w;
        l(e.v, e.v) += e.w;
    }
    return l;
}

// R(G,x) = sum_ij w_ij (x_i - x_j)^2 = x^T L_G x.
inline double quadratic_form(const Graph& g, const Vector& x) {
    if (x.size() != g.vertex_count())
        throw std::invalid_argument("quadratic_form: vector length mismatch");
    double r = 0.0;
    for (const Edge& e : g.edges()) {
        double d = x[e.u] - x[e.v];
        r += e.w * d * d;
    }
    return r;
}

inline double quadratic_form(const Graph& g, const std::vector<double>& x) {
    return quadratic_form(g, Eigen::Map<const Vector>(x.data(), static_cast<long>(x.size())));
}

namespace detail {
inline std::vector<char> set_flags(int n, const std::vector<int>& s) {
    std::vector<char> in(n, 0);
    for (int v : s) {
        if (v < 0 || v >= n) throw std::invalid_argument("vertex set: id out of range");
        in[v] = 1;
    }
    return in;
}
}  // namespace detail

// delta_G(S): edges with exactly one endpoint in S.
inline std::vector<Edge> cut_edges(const Graph& g, const std::vector<int>& s) {
    auto in = detail::set_flags(g.vertex_count(), s);
    std::vector<Edge> cut;
    for (const Edge& e : g.edges())
        if (in[e.u] != in[e.v]) cut.push_back(e);
    return cut;
}

inline double cut_weight(const Graph& g, const std::vector<int>& s) {
    double w = 0.0;
    for (const Edge& e : cut_edges(g, s)) w += e.w;
    return w;
}

inline int cut_size(const Graph& g, const std::vector<int>& s) {
    return static_cast<int>(cut_edges(g, s).size());
}

// Unweighted shortest-path distances from s; -1 for unreachable.
inline std::vector<int> bfs_distances(const Graph& g, int s) {
    std::vector<int> dist(g.vertex_count(), -1);
    std::queue<int> q;
    dist.at(s) = 0;
    q.push(s);
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (auto [y, w] : g.neighbors(x))
            if (dist[y] < 0) {
                dist[y] = dist[x] + 1;
                q.push(y);
            }
    }
    return dist;
}

inline int tree_distance(const Graph& g, int u, int v) {
    int d = bfs_distances(g, u).at(v);
    if (d < 0) throw std::invalid_argument("tree_distance: vertices not connected");
    return d;
}

// dist[u][v] by repeated BFS; -1 where disconnected.
inline std::vector<std::vector<int>> all_pairs_distances(const Graph& g) {
    std::vector<std::vector<int>> d(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) d[v] = bfs_distances(g, v);
    return d;
}

// Bijection pi between two vertex sets of equal size, built incrementally.
// forward()[u] and inverse()[v] are -1 while unassigned.
class VertexMapping {
public:
    VertexMapping() = default;
    explicit VertexMapping(int n) : fwd_(n, -1), inv_(n, -1) {}

    static VertexMapping identity(int n) {
        VertexMapping m(n);
        for (int i = 0; i < n; ++i) m.assign(i, i);
        return m;
    }

    static VertexMapping from_vector(const std::vector<int>& image) {
        VertexMapping m(static_cast<int>(image.size()));
        for (int i = 0; i < static_cast<int>(image.size()); ++i) m.assign(i, image[i]);
        return m;
    }

    int size() const { return static_cast<int>(fwd_.size()); }

    void assign(int u, int v) {
        if (fwd_.at(u) != -1 || inv_.at(v) != -1)
            throw std::invalid_argument("mapping: slot already assigned");
        fwd_[u] = v;
        inv_[v] = u;
    }

    void unassign(int u) {
        int v = fwd_.at(u);
        if (v == -1) return;
        fwd_[u] = -1;
        inv_[v] = -1;
    }

    int image(int u) const { return fwd_.at(u); }
    int preimage(int v) const { return inv_.at(v); }
    bool assigned(int u) const { return fwd_.at(u) != -1; }

    bool complete() const {
        return std::find(fwd_.begin(), fwd_.end(), -1) == fwd_.end();
    }

    const std::vector<int>& forward() const { return fwd_; }
    const std::vector<int>& inverse() const { return inv_; }

    VertexMapping inverted() const {
        VertexMapping m(size());
        for (int u = 0; u < size(); ++u)
            if (fwd_[u] != -1) m.assign(fwd_[u], u);
        return m;
    }

    friend bool operator==(const VertexMapping& a, const VertexMapping& b) {
        return a.fwd_ == b.fwd_;
    }

private:
    std::vector<int> fwd_;
    std::vector<int> inv_;
};

// Relabels vertices: edge (u,v,w) becomes (pi(u), pi(v), w).
inline Graph apply_permutation(const Graph& g, const VertexMapping& pi) {
    if (pi.size() != g.vertex_count() || !pi.complete())
        throw std::invalid_argument("apply_permutation: mapping is not a full bijection");
    std::vector<Edge> edges;
    edges.reserve(g.edges().size());
    for (const Edge& e : g.edges()) edges.emplace_back(pi.image(e.u), pi.image(e.v), e.w);
    return Graph(g.vertex_count(), std::move(edges));
}

// Tree with a designated root: parent/children structure and subtree queries.
class RootedTree {
public:
    RootedTree(Graph tree, int root) : graph_(std::move(tree)), root_(root) {
        if (!is_tree(graph_)) throw std::invalid_argument("rooted tree: graph is not a tree");
        if (root_ < 0 || root_ >= graph_.vertex_count())
            throw std::invalid_argument("rooted tree: root out of range");
        const int n = graph_.vertex_count();
        parent_.assign(n, -1);
        depth_.assign(n, 0);
        children_.assign(n, {});
        order_.reserve(n);
        std::queue<int> q;
        q.push(root_);
        std::vector<char> seen(n, 0);
        seen[root_] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            order_.push_back(x);
            for (auto [y, w] : graph_.neighbors(x))
                if (!seen[y]) {
                    seen[y] = 1;
                    parent_[y] = x;
                    depth_[y] = depth_[x] + 1;
                    children_[x].push_back(y);
                    q.push(y);
                }
        }
    }

    const Graph& graph() const { return graph_; }
    int root() const { return root_; }
    int parent(int v) const { return parent_.at(v); }
    int depth(int v) const { return depth_.at(v); }
    const std::vector<int>& children(int v) const { return children_.at(v); }

    // Vertices in BFS order from the root (parents before children).
    const std::vector<int>& bfs_order() const { return order_; }

    // T_u: vertex set of the subtree rooted at u, sorted.
    std::vector<int> subtree_vertices(int u) const {
        std::vector<int> out;
        std::queue<int> q;
        q.push(u);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            out.push_back(x);
            for (int c : children_.at(x)) q.push(c);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // T_e: the side of tree edge e that does not contain the root.
    std::vector<int> subtree_under_edge(const Edge& e) const {
        if (!graph_.has_edge(e.u, e.v)) throw std::invalid_argument("subtree_under_edge: not a tree edge");
        int child = (parent_.at(e.v) == e.u) ? e.v : (parent_.at(e.u) == e.v ? e.u : -1);
        if (child < 0) throw std::logic_error("subtree_under_edge: edge not in parent structure");
        return subtree_vertices(child);
    }

    // The child endpoint of tree edge e (the deeper side).
    int edge_child(const Edge& e) const {
        int child = (parent_.at(e.v) == e.u) ? e.v : (parent_.at(e.u) == e.v ? e.u : -1);
        if (child < 0) throw std::invalid_argument("edge_child: not a tree edge");
        return child;
    }

private:
    Graph graph_;
    int root_;
    std::vector<int> parent_;
    std::vector<int> depth_;
    std::vector<std::vector<int>> children_;
    std::vector<int> order_;
};

inline std::vector<int> subtree_under_edge(const RootedTree& t, const Edge& e) {
    return t.subtree_under_edge(e);
}

// Lowest-id centroid of a tree (vertex minimizing the largest component of T - v).
inline int tree_centroid(const Graph& g) {
    if (!is_tree(g)) throw std::invalid_argument("tree_centroid: not a tree");
    const int n = g.vertex_count();
    RootedTree rt(g, 0);
    std::vector<int> size(n, 1);
    const auto& order = rt.bfs_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (rt.parent(*it) >= 0) size[rt.parent(*it)] += size[*it];
    int best = 0, best_heavy = n + 1;
    for (int v = 0; v < n; ++v) {
        int heavy = n - size[v];
        for (int c : rt.children(v)) heavy = std::max(heavy, size[c]);
        if (heavy < best_heavy) {
            best_heavy = heavy;
            best = v;
        }
    }
    return best;
}

// Finite induced subgraph of the integer grid, maximum degree 3. Vertices are
// indexed by their position in `points`; edges are exactly the unit-distance pairs.
struct CubicSubgrid {
    std::vector<std::pair<int, int>> points;
    Graph graph;
};

inline CubicSubgrid make_subgrid(const std::vector<std::pair<int, int>>& points) {
    const int n = static_cast<int>(points.size());
    std::set<std::pair<int, int>> uniq(points.begin(), points.end());
    if (static_cast<int>(uniq.size()) != n)
        throw std::invalid_argument("subgrid: duplicate coordinates");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int dx = std::abs(points[i].first - points[j].first);
            int dy = std::abs(points[i].second - points[j].second);
            if (dx + dy == 1) edges.emplace_back(i, j, 1.0);
        }
    Graph g(n, std::move(edges));
    for (int v = 0; v < n; ++v)
        if (g.degree(v) > 3)
            throw std::invalid_argument("subgrid: vertex of degree " + std::to_string(g.degree(v)) +
                                        " violates the cubic constraint");
    return CubicSubgrid{points, std::move(g)};
}

}  // namespace sgsim
