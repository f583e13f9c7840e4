#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sgsim/generate.hpp"
#include "sgsim/graph.hpp"
#include "sgsim/hamiltonian.hpp"
#include "sgsim/io.hpp"
#include "sgsim/rational.hpp"

namespace sgsim {

// A cubic subgrid paired with the canonical n-cycle. Some placement of the
// cycle precedes the grid graph iff the grid graph is Hamiltonian.
struct ReductionInstance {
    CubicSubgrid grid;
    Graph cycle;
};

inline ReductionInstance reduce_hamiltonian(const CubicSubgrid& g) {
    if (g.graph.vertex_count() < 3)
        throw std::invalid_argument("reduce_hamiltonian: need at least 3 vertices");
    return ReductionInstance{g, make_cycle(g.graph.vertex_count())};
}

// Deletes the edges common to both graphs from each. Shared edges carry the
// same quadratic-form term on both sides, so R(g,x) - R(h,x) is unchanged.
inline std::pair<Graph, Graph> strip_shared_edges(const Graph& g, const Graph& h) {
    if (g.vertex_count() != h.vertex_count())
        throw std::invalid_argument("strip_shared_edges: vertex sets must match");
    std::set<std::pair<int, int>> hset;
    for (const Edge& e : h.edges()) hset.insert({e.u, e.v});
    std::vector<Edge> ge, he;
    for (const Edge& e : g.edges())
        if (!hset.count({e.u, e.v})) ge.push_back(e);
    for (const Edge& e : h.edges())
        if (!g.has_edge(e.u, e.v)) he.push_back(e);
    return {Graph(g.vertex_count(), std::move(ge)), Graph(h.vertex_count(), std::move(he))};
}

// Shared-free pair with pendant black edges iteratively deleted. An edge at v
// is removed while deg_g(v) = 1 and deg_h(v) = 0; the removal log allows
// witnesses to be lifted back.
struct StrippedPair {
    Graph g_stripped;
    Graph h_stripped;
    std::vector<std::pair<int, int>> lift_log;  // (v, w): v was the pendant endpoint
    std::vector<std::pair<int, int>> coords;    // grid coordinates, when known
};

inline StrippedPair prune_degree_one(const Graph& g1, const Graph& h1) {
    if (g1.vertex_count() != h1.vertex_count())
        throw std::invalid_argument("prune_degree_one: vertex sets must match");
    const int n = g1.vertex_count();
    std::set<std::pair<int, int>> edges;
    std::vector<int> deg(n, 0);
    for (const Edge& e : g1.edges()) {
        edges.insert({e.u, e.v});
        ++deg[e.u];
        ++deg[e.v];
    }
    std::vector<std::pair<int, int>> log;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < n && !changed; ++v) {
            if (deg[v] != 1 || h1.degree(v) != 0) continue;
            for (const auto& e : edges) {
                if (e.first != v && e.second != v) continue;
                int w = e.first == v ? e.second : e.first;
                log.push_back({v, w});
                edges.erase(e);
                --deg[v];
                --deg[w];
                changed = true;
                break;
            }
        }
    }
    std::vector<Edge> ge;
    for (const auto& [u, v] : edges) ge.emplace_back(u, v, 1.0);
    StrippedPair sp{Graph(n, std::move(ge)), h1, std::move(log), {}};
    return sp;
}

// Claim-style degree bookkeeping: deg_g(u) <= deg_h(u) + 1 after stripping and
// pruning, whenever both inputs started as a cubic subgrid and a cycle.
inline bool degree_inequality_holds(const StrippedPair& sp) {
    for (int v = 0; v < sp.g_stripped.vertex_count(); ++v)
        if (sp.g_stripped.degree(v) > sp.h_stripped.degree(v) + 1) return false;
    return true;
}

// A rational vector x with R(h', x) > R(g', x) certified exactly.
struct Witness {
    std::vector<Rational> x;
    Rational lhs;  // R(h', x)
    Rational rhs;  // R(g', x)
    std::string case_tag;
};

inline Witness make_witness(const Graph& g, const Graph& h, std::vector<Rational> x,
                            std::string case_tag) {
    Witness w;
    w.x = std::move(x);
    w.case_tag = std::move(case_tag);
    w.lhs = quadratic_form_exact(h, w.x);
    w.rhs = quadratic_form_exact(g, w.x);
    if (!(w.lhs > w.rhs)) throw std::logic_error("witness: inequality is not strict");
    return w;
}

// Pendant black vertex that still carries a blue edge: x_v = 0, x_w = 1/2 on
// the unique black neighbor, 1 elsewhere. R(g') <= 3/4 < 1 <= R(h').
inline Witness witness_pendant(const StrippedPair& sp, int v) {
    const Graph& g = sp.g_stripped;
    const Graph& h = sp.h_stripped;
    if (g.degree(v) != 1 || h.degree(v) < 1)
        throw std::invalid_argument("witness_pendant: vertex does not match the pattern");
    int w = g.neighbors(v)[0].first;
    std::vector<Rational> x(g.vertex_count(), Rational(1));
    x[v] = Rational(0);
    x[w] = Rational(1, 2);
    Witness out = make_witness(g, h, std::move(x), "pendant");
    if (!(out.rhs <= Rational(3, 4)) || !(out.lhs >= Rational(1)))
        throw std::logic_error("witness_pendant: stated bounds violated");
    return out;
}

// Black path u-w1-w2 where w1 has exactly those two black edges, with a blue
// edge (u,v): x = (0, 2, 1/2, 1, ...). R(g') = deg_g(u)+deg_g(v)-1/2 while
// R(h') >= deg_h(u)+deg_h(v)+2.
inline Witness witness_black_path2(const StrippedPair& sp, int u, int v, int w1, int w2) {
    const Graph& g = sp.g_stripped;
    const Graph& h = sp.h_stripped;
    std::set<int> distinct{u, v, w1, w2};
    if (distinct.size() != 4) throw std::invalid_argument("witness_black_path2: vertices must differ");
    if (!g.has_edge(u, w1) || !g.has_edge(w1, w2) || g.degree(w1) != 2)
        throw std::invalid_argument("witness_black_path2: black pattern violated");
    if (!h.has_edge(u, v)) throw std::invalid_argument("witness_black_path2: (u,v) must be blue");
    std::vector<Rational> x(g.vertex_count(), Rational(1));
    x[u] = Rational(0);
    x[v] = Rational(2);
    x[w1] = Rational(1, 2);
    Witness out = make_witness(g, h, std::move(x), "black_path2");
    Rational grhs = Rational(g.degree(u) + g.degree(v)) - Rational(1, 2);
    if (out.rhs != grhs) throw std::logic_error("witness_black_path2: closed form mismatch");
    if (!(out.lhs >= Rational(h.degree(u) + h.degree(v) + 2)))
        throw std::logic_error("witness_black_path2: stated bounds violated");
    if (!(out.lhs - out.rhs >= Rational(1, 2)))
        throw std::logic_error("witness_black_path2: gap below 1/2");
    return out;
}

// Black path u-w1-w2-w3 with blue edge (u,v), where v is black-adjacent to
// neither w1 nor w2 and u is not adjacent to w2 in either color:
// x = (0, 2, 1/3, 2/3, 1, ...). R(g') <= deg_g(u)+deg_g(v)-1/9.
inline Witness witness_black_path3(const StrippedPair& sp, int u, int v, int w1, int w2, int w3) {
    const Graph& g = sp.g_stripped;
    const Graph& h = sp.h_stripped;
    std::set<int> distinct{u, v, w1, w2, w3};
    if (distinct.size() != 5) throw std::invalid_argument("witness_black_path3: vertices must differ");
    if (!g.has_edge(u, w1) || !g.has_edge(w1, w2) || !g.has_edge(w2, w3))
        throw std::invalid_argument("witness_black_path3: black pattern violated");
    if (g.has_edge(v, w1) || g.has_edge(v, w2))
        throw std::invalid_argument("witness_black_path3: v must avoid w1 and w2");
    if (!h.has_edge(u, v) || h.has_edge(u, w2) || g.has_edge(u, w2))
        throw std::invalid_argument("witness_black_path3: blue pattern violated");
    if (std::max(g.degree(w1), g.degree(w2)) > 3)
        throw std::invalid_argument("witness_black_path3: degrees exceed the cubic bound");
    std::vector<Rational> x(g.vertex_count(), Rational(1));
    x[u] = Rational(0);
    x[v] = Rational(2);
    x[w1] = Rational(1, 3);
    x[w2] = Rational(2, 3);
    Witness out = make_witness(g, h, std::move(x), "black_path3");
    Rational bound = Rational(g.degree(u) + g.degree(v)) - Rational(1, 9);
    if (!(out.rhs <= bound)) throw std::logic_error("witness_black_path3: stated bounds violated");
    if (!(out.lhs >= Rational(h.degree(u) + h.degree(v) + 2)))
        throw std::logic_error("witness_black_path3: stated bounds violated");
    if (!(out.lhs - out.rhs >= Rational(1, 9)))
        throw std::logic_error("witness_black_path3: gap below 1/9");
    return out;
}

// Degree-3 black vertex: select a blue edge (u,v) pointing at least two grid
// steps away and a black neighbor w1 every black path from which to v has
// length >= 3; dispatch on deg(w1) to one of the path witnesses.
inline Witness witness_branch_vertex(const StrippedPair& sp, int u) {
    const Graph& g = sp.g_stripped;
    const Graph& h = sp.h_stripped;
    if (g.degree(u) != 3) throw std::invalid_argument("witness_branch_vertex: deg_g(u) must be 3");
    if (sp.coords.size() != static_cast<std::size_t>(g.vertex_count()))
        throw std::invalid_argument("witness_branch_vertex: grid coordinates required");
    for (auto [v, wt] : h.neighbors(u)) {
        int dx = std::abs(sp.coords[u].first - sp.coords[v].first);
        int dy = std::abs(sp.coords[u].second - sp.coords[v].second);
        bool axis_parallel = dx == 0 || dy == 0;
        if (axis_parallel && dx + dy < 2) continue;  // would be a grid edge
        auto dist = bfs_distances(g, v);
        for (auto [w1, wt1] : g.neighbors(u)) {
            if (dist[w1] >= 0 && dist[w1] < 3) continue;
            if (g.degree(w1) == 2) {
                int w2 = -1;
                for (auto [c, wtc] : g.neighbors(w1))
                    if (c != u) w2 = c;
                if (w2 < 0 || w2 == v) continue;
                return witness_black_path2(sp, u, v, w1, w2);
            }
            if (g.degree(w1) == 3) {
                for (auto [w2, wt2] : g.neighbors(w1)) {
                    if (w2 == u || w2 == v || h.has_edge(u, w2) || g.has_edge(u, w2)) continue;
                    if (g.has_edge(v, w2)) continue;
                    for (auto [w3, wt3] : g.neighbors(w2)) {
                        if (w3 == w1 || w3 == u || w3 == v) continue;
                        return witness_black_path3(sp, u, v, w1, w2, w3);
                    }
                }
            }
        }
    }
    throw std::logic_error("witness_branch_vertex: no qualifying pattern found");
}

// Cut with no black edges leaving but at least one blue edge leaving:
// indicator vector of S.
inline Witness witness_cut(const StrippedPair& sp, const std::vector<int>& s) {
    const Graph& g = sp.g_stripped;
    const Graph& h = sp.h_stripped;
    if (!cut_edges(g, s).empty())
        throw std::invalid_argument("witness_cut: black edges leave the set");
    auto blue = cut_edges(h, s);
    if (blue.empty()) throw std::invalid_argument("witness_cut: no blue edge leaves the set");
    std::vector<Rational> x(g.vertex_count(), Rational(0));
    for (int v : s) x[v] = Rational(1);
    Witness out = make_witness(g, h, std::move(x), "cut");
    if (out.rhs != Rational(0) || !(out.lhs >= Rational(1)))
        throw std::logic_error("witness_cut: stated bounds violated");
    return out;
}

// Black cycle of length >= 5, all of degree 2, with a blue edge (a,b) inside:
// interpolate 0..1 along both arcs. R(g') = 1/(k1+1) + 1/(k2+1) <= 5/6.
inline Witness witness_long_cycle(const StrippedPair& sp, const std::vector<int>& cycle, int a,
                                  int b) {
    const Graph& g = sp.g_stripped;
    const Graph& h = sp.h_stripped;
    const int len = static_cast<int>(cycle.size());
    if (len < 5) throw std::invalid_argument("witness_long_cycle: cycle must have length >= 5");
    for (int i = 0; i < len; ++i) {
        if (g.degree(cycle[i]) != 2)
            throw std::invalid_argument("witness_long_cycle: cycle vertices must have degree 2");
        if (!g.has_edge(cycle[i], cycle[(i + 1) % len]))
            throw std::invalid_argument("witness_long_cycle: vertices do not trace a black cycle");
    }
    if (!h.has_edge(a, b)) throw std::invalid_argument("witness_long_cycle: (a,b) must be blue");
    auto pos_of = [&](int v) {
        for (int i = 0; i < len; ++i)
            if (cycle[i] == v) return i;
        throw std::invalid_argument("witness_long_cycle: endpoint not on the cycle");
    };
    int pa = pos_of(a), pb = pos_of(b);
    // arc lengths between a and b along the two directions
    int fwd = (pb - pa + len) % len;
    int k1 = fwd - 1, k2 = len - fwd - 1;
    if (k1 < 1 || k2 < 1)
        throw std::invalid_argument("witness_long_cycle: blue endpoints are cycle-adjacent");
    std::vector<Rational> x(g.vertex_count(), Rational(0));
    x[a] = Rational(0);
    x[b] = Rational(1);
    for (int i = 1; i <= k1; ++i) x[cycle[(pa + i) % len]] = Rational(i, k1 + 1);
    for (int i = 1; i <= k2; ++i) x[cycle[(pa - i + len * 2) % len]] = Rational(i, k2 + 1);
    Witness out = make_witness(g, h, std::move(x), "long_cycle");
    Rational expect = Rational(1, k1 + 1) + Rational(1, k2 + 1);
    if (out.rhs != expect) throw std::logic_error("witness_long_cycle: closed form mismatch");
    if (!(out.rhs <= Rational(5, 6)) || !(out.lhs >= Rational(1)))
        throw std::logic_error("witness_long_cycle: stated bounds violated");
    return out;
}

// Replays pruned pendant edges in reverse, copying the retained endpoint's
// value onto the pendant vertex. Values are preserved exactly.
inline Witness lift_witness(const Witness& w, const std::vector<std::pair<int, int>>& lift_log,
                            const Graph& g1, const Graph& h1) {
    std::vector<Rational> x = w.x;
    for (auto it = lift_log.rbegin(); it != lift_log.rend(); ++it) x[it->first] = x[it->second];
    Witness out = make_witness(g1, h1, std::move(x), w.case_tag);
    if (out.lhs != w.lhs || out.rhs != w.rhs)
        throw std::logic_error("lift_witness: replay changed the certified values");
    return out;
}

// Swaps the two diagonals of a black 4-cycle for one of its side pairs,
// keeping a single n-cycle and gaining exactly two shared edges.
inline Graph improve_cycle(const Graph& g, const Graph& h, const std::array<int, 4>& c4) {
    auto [v1, v2, v3, v4] = c4;
    for (int i = 0; i < 4; ++i) {
        int a = c4[i], b = c4[(i + 1) % 4];
        if (!g.has_edge(a, b)) throw std::invalid_argument("improve_cycle: not a black 4-cycle");
    }
    if (!h.has_edge(v1, v3) || !h.has_edge(v2, v4))
        throw std::invalid_argument("improve_cycle: diagonals are not blue");
    auto shared_count = [&](const Graph& cyc) {
        int c = 0;
        for (const Edge& e : cyc.edges()) c += g.has_edge(e.u, e.v) ? 1 : 0;
        return c;
    };
    auto try_option = [&](std::pair<int, int> e1, std::pair<int, int> e2) -> std::optional<Graph> {
        std::vector<Edge> edges;
        for (const Edge& e : h.edges()) {
            if ((e.u == std::min(v1, v3) && e.v == std::max(v1, v3)) ||
                (e.u == std::min(v2, v4) && e.v == std::max(v2, v4)))
                continue;
            edges.push_back(e);
        }
        edges.emplace_back(e1.first, e1.second, 1.0);
        edges.emplace_back(e2.first, e2.second, 1.0);
        Graph cand(h.vertex_count(), std::move(edges));
        for (int v = 0; v < cand.vertex_count(); ++v)
            if (cand.degree(v) != 2) return std::nullopt;
        if (!is_connected(cand)) return std::nullopt;
        return cand;
    };
    for (auto opt : {try_option({v1, v2}, {v3, v4}), try_option({v1, v4}, {v2, v3})}) {
        if (!opt) continue;
        if (shared_count(*opt) != shared_count(h) + 2)
            throw std::logic_error("improve_cycle: shared edge count did not grow by 2");
        return *opt;
    }
    throw std::logic_error("improve_cycle: neither side pair closes a single cycle");
}

namespace hardness_detail {

// Cycle components of an all-degree-{0,2} graph, each as a cyclic vertex order.
inline std::vector<std::vector<int>> cycle_components(const Graph& g) {
    std::vector<std::vector<int>> cycles;
    std::vector<char> seen(g.vertex_count(), 0);
    for (int s = 0; s < g.vertex_count(); ++s) {
        if (seen[s] || g.degree(s) == 0) continue;
        if (g.degree(s) != 2) throw std::logic_error("cycle_components: degree is not 0 or 2");
        std::vector<int> cyc{s};
        seen[s] = 1;
        int prev = -1, cur = s;
        while (true) {
            int next = -1;
            for (auto [w, wt] : g.neighbors(cur))
                if (w != prev) {
                    next = w;
                    break;
                }
            if (next == s) break;
            seen[next] = 1;
            cyc.push_back(next);
            prev = cur;
            cur = next;
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

struct CaseOutcome {
    std::optional<Witness> witness;
    std::optional<std::array<int, 4>> rewire;  // 4-cycle whose diagonals get swapped
};

// The case analysis, in proof order: pendant, branch vertex, isolated vertex
// with a blue edge, long cycle (blue chord or cut), 4-cycle with an escaping
// blue edge, and finally the all-internal 4-cycle rewiring.
inline CaseOutcome dispatch_case(const StrippedPair& sp) {
    const Graph& g = sp.g_stripped;
    const Graph& h = sp.h_stripped;
    const int n = g.vertex_count();
    for (int v = 0; v < n; ++v)
        if (g.degree(v) == 1) {
            if (h.degree(v) < 1) throw std::logic_error("dispatch: pendant survived pruning");
            return {witness_pendant(sp, v), std::nullopt};
        }
    for (int u = 0; u < n; ++u)
        if (g.degree(u) == 3) return {witness_branch_vertex(sp, u), std::nullopt};
    for (int v = 0; v < n; ++v)
        if (g.degree(v) == 0 && h.degree(v) >= 1) return {witness_cut(sp, {v}), std::nullopt};
    auto cycles = cycle_components(g);
    for (const auto& cyc : cycles) {
        if (static_cast<int>(cyc.size()) < 5) continue;
        std::set<int> on(cyc.begin(), cyc.end());
        for (int a : cyc)
            for (auto [b, wt] : h.neighbors(a))
                if (a < b && on.count(b)) return {witness_long_cycle(sp, cyc, a, b), std::nullopt};
        return {witness_cut(sp, cyc), std::nullopt};
    }
    for (const auto& cyc : cycles) {
        std::set<int> on(cyc.begin(), cyc.end());
        for (int a : cyc)
            for (auto [b, wt] : h.neighbors(a))
                if (!on.count(b)) return {witness_cut(sp, cyc), std::nullopt};
    }
    for (const auto& cyc : cycles) {
        if (cyc.size() != 4) throw std::logic_error("dispatch: unexpected short cycle");
        return {std::nullopt, std::array<int, 4>{cyc[0], cyc[1], cyc[2], cyc[3]}};
    }
    throw std::logic_error("dispatch: no case applies");
}

inline std::vector<int> cycle_order(const Graph& h) {
    auto cycles = cycle_components(h);
    if (cycles.size() != 1 || static_cast<int>(cycles[0].size()) != h.vertex_count())
        throw std::invalid_argument("cycle placement must be a single n-cycle");
    return cycles[0];
}

}  // namespace hardness_detail

struct ResolveResult {
    // Exactly one of `witness` and `hamiltonian_cycle` is set. The witness is
    // certified against the original inputs; `case_witness` carries the
    // stripped-pair values and constants of the case that produced it.
    std::optional<Witness> witness;
    std::optional<Witness> case_witness;
    std::optional<std::vector<int>> hamiltonian_cycle;
    int rewiring_rounds = 0;
};

namespace hardness_detail {
// Compact instance dump attached to invariant failures.
inline std::string dump_state(const Graph& g, const Graph& h) {
    return " [g=" + graph_to_json(g).dump() + " h=" + graph_to_json(h).dump() + "]";
}
}  // namespace hardness_detail

// The constructive driver: strip shared edges, prune pendants, and dispatch
// on the case analysis. A witness case refutes the given placement outright;
// otherwise the placement is dominated, every round swaps a 4-cycle's
// diagonals for two more shared edges, and the loop ends with a Hamiltonian
// cycle of the grid graph.
inline ResolveResult resolve(const CubicSubgrid& grid, const Graph& placement) {
    const Graph& g = grid.graph;
    const int n = g.vertex_count();
    if (placement.vertex_count() != n)
        throw std::invalid_argument("resolve: vertex sets must match");
    hardness_detail::cycle_order(placement);  // validates the placement shape
    Graph h = placement;
    ResolveResult result;
    for (int round = 0; round <= n + 1; ++round) {
        auto [g1, h1] = strip_shared_edges(g, h);
        StrippedPair sp = prune_degree_one(g1, h1);
        sp.coords = grid.points;
        if (sp.h_stripped.edge_count() == 0) {
            result.hamiltonian_cycle = hardness_detail::cycle_order(h);
            result.rewiring_rounds = round;
            return result;
        }
        hardness_detail::CaseOutcome outcome;
        try {
            outcome = hardness_detail::dispatch_case(sp);
        } catch (const std::logic_error& e) {
            throw std::logic_error(e.what() + hardness_detail::dump_state(g, h));
        }
        if (outcome.witness) {
            if (round != 0)
                throw std::logic_error(
                    "resolve: witness case after a rewiring round on a dominated placement" +
                    hardness_detail::dump_state(g, h));
            Witness lifted = lift_witness(*outcome.witness, sp.lift_log, g1, h1);
            result.case_witness = *outcome.witness;
            result.witness = make_witness(g, h, lifted.x, lifted.case_tag);
            result.rewiring_rounds = round;
            return result;
        }
        h = improve_cycle(g, h, *outcome.rewire);
    }
    throw std::logic_error("resolve: rewiring loop exceeded its bound" +
                           hardness_detail::dump_state(g, h));
}

// ---- witness JSON (rationals as ["numerator","denominator"] string pairs) ----

inline Json rational_to_json(const Rational& r) {
    return Json::array({std::to_string(r.num()), std::to_string(r.den())});
}

inline Rational rational_from_json(const Json& j) {
    return Rational::parse(j.at(0).get<std::string>(), j.at(1).get<std::string>());
}

inline Json witness_to_json(const Witness& w) {
    Json j;
    Json xs = Json::array();
    for (const Rational& r : w.x) xs.push_back(rational_to_json(r));
    j["x"] = std::move(xs);
    j["lhs"] = rational_to_json(w.lhs);
    j["rhs"] = rational_to_json(w.rhs);
    j["case"] = w.case_tag;
    return j;
}

inline Witness witness_from_json(const Json& j) {
    Witness w;
    for (const auto& r : j.at("x")) w.x.push_back(rational_from_json(r));
    w.lhs = rational_from_json(j.at("lhs"));
    w.rhs = rational_from_json(j.at("rhs"));
    w.case_tag = j.value("case", "");
    return w;
}

// Exact recheck of a stored witness against a graph pair.
inline bool verify_witness(const Graph& g, const Graph& h, const Witness& w) {
    if (static_cast<int>(w.x.size()) != g.vertex_count()) return false;
    Rational lhs = quadratic_form_exact(h, w.x);
    Rational rhs = quadratic_form_exact(g, w.x);
    return lhs == w.lhs && rhs == w.rhs && lhs > rhs;
}

}  // namespace sgsim
