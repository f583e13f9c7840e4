#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "sgsim/embedding.hpp"
#include "sgsim/graph.hpp"
#include "sgsim/spectral.hpp"

namespace sgsim {

// A dynamic-programming state for aligning rooted trees: vertex u of the
// demand tree, the claimed image set T of u's subtree, the image v of u,
// the preimages u_j of T's boundary vertices, and the preimages S_j of the
// subtrees hanging under T's boundary edges. Boundary edges are ordered by
// the fixed host edge ordering; boundary_preimages and cut_preimages follow
// that order.
struct AlignmentState {
    int g_vertex = -1;
    std::vector<int> image_set;
    int image_vertex = -1;
    std::vector<int> boundary_preimages;
    std::vector<std::vector<int>> cut_preimages;
};

namespace align_detail {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

inline std::vector<int> mask_to_vec(Mask m) {
    std::vector<int> out;
    for (int v = 0; m; ++v, m >>= 1)
        if (m & 1u) out.push_back(v);
    return out;
}

inline Mask vec_to_mask(const std::vector<int>& v) {
    Mask m = 0;
    for (int x : v) m |= Mask{1} << x;
    return m;
}

// Everything fixed for one rooted alignment instance.
struct Problem {
    Graph g, h;
    int n = 0, k = 1, ell = 1, rg = 0, rh = 0;
    std::vector<std::vector<int>> dg, dh;
    std::vector<std::vector<int>> gchildren;
    std::vector<int> g_order;          // BFS order from rg
    std::vector<Mask> gsub;            // per G-vertex: subtree mask
    std::vector<Mask> gside, hside;    // per edge index: root-free side mask

    struct CatEntry {
        Mask mask;
        std::vector<int> dedges;  // boundary edge indices, ascending
    };
    std::vector<CatEntry> gcat, hcat;           // all sets with boundary size in [1,k]
    std::map<int, std::vector<int>> hcat_by_size;  // |T| -> hcat indices

    Problem(const Graph& g_, int rg_, const Graph& h_, int rh_, int k_, int ell_)
        : g(g_), h(h_), n(g_.vertex_count()), k(k_), ell(ell_), rg(rg_), rh(rh_) {
        if (!is_tree(g) || !is_tree(h)) throw std::invalid_argument("align: both graphs must be trees");
        if (g.vertex_count() != h.vertex_count())
            throw std::invalid_argument("align: vertex sets must match");
        if (n > 24) throw std::invalid_argument("align: vertex count exceeds the supported limit");
        if (k < 1 || ell < 1) throw std::invalid_argument("align: k and ell must be >= 1");
        dg = all_pairs_distances(g);
        dh = all_pairs_distances(h);
        RootedTree gt(g, rg), ht(h, rh);
        gchildren.resize(n);
        gsub.assign(n, 0);
        for (int v = 0; v < n; ++v) {
            gchildren[v] = gt.children(v);
            gsub[v] = vec_to_mask(gt.subtree_vertices(v));
        }
        g_order = gt.bfs_order();
        gside.resize(g.edge_count());
        for (int i = 0; i < g.edge_count(); ++i)
            gside[i] = vec_to_mask(gt.subtree_under_edge(g.edges()[i]));
        hside.resize(h.edge_count());
        for (int i = 0; i < h.edge_count(); ++i)
            hside[i] = vec_to_mask(ht.subtree_under_edge(h.edges()[i]));
        gcat = build_catalog(g, gside);
        hcat = build_catalog(h, hside);
        for (int i = 0; i < static_cast<int>(hcat.size()); ++i)
            hcat_by_size[popcount(hcat[i].mask)].push_back(i);
    }

    // Root-free sets with 1..k boundary edges. In a tree each boundary edge
    // set D yields exactly one such set: the vertices separated from the root
    // by an odd number of D-edges, i.e. the XOR of the root-free edge sides.
    std::vector<CatEntry> build_catalog(const Graph& graph, const std::vector<Mask>& side) const {
        std::vector<CatEntry> cat;
        const int m = graph.edge_count();
        std::vector<int> combo;
        std::function<void(int, int)> rec = [&](int start, int want) {
            if (want == 0) {
                Mask mask = 0;
                for (int e : combo) mask ^= side[e];
                cat.push_back({mask, combo});
                return;
            }
            for (int e = start; e <= m - want; ++e) {
                combo.push_back(e);
                rec(e + 1, want - 1);
                combo.pop_back();
            }
        };
        for (int t = 1; t <= k && t <= m; ++t) rec(0, t);
        return cat;
    }

    int boundary_count_g(Mask s) const {
        int c = 0;
        for (const Edge& e : g.edges()) c += ((s >> e.u) ^ (s >> e.v)) & 1u;
        return c;
    }

    std::vector<int> boundary_edges_h(Mask t) const {
        std::vector<int> out;
        for (int i = 0; i < h.edge_count(); ++i) {
            const Edge& e = h.edges()[i];
            if (((t >> e.u) ^ (t >> e.v)) & 1u) out.push_back(i);
        }
        return out;
    }

    int boundary_count_h(Mask t) const { return static_cast<int>(boundary_edges_h(t).size()); }

    int h_endpoint_in(int edge_idx, Mask t) const {
        const Edge& e = h.edges()[edge_idx];
        return (t >> e.u & 1u) ? e.u : e.v;
    }
};

// Full tuple in mask form.
struct StateM {
    int u = -1;
    Mask t = 0;
    int v = -1;
    std::vector<int> ubound;
    std::vector<Mask> s;
};

inline Mask image_mask(Mask m, const std::vector<int>& img) {
    Mask out = 0;
    while (m) {
        int b = std::countr_zero(m);
        m &= m - 1;
        out |= Mask{1} << img[b];
    }
    return out;
}

inline bool state_is_valid(const Problem& p, const StateM& s) {
    if (s.u < 0 || s.u >= p.n || s.u == p.rg) return false;
    if (s.v < 0 || s.v >= p.n || s.v == p.rh) return false;
    if (s.t == 0 || (s.t >> p.rh & 1u)) return false;
    auto dedges = p.boundary_edges_h(s.t);
    const int x = static_cast<int>(dedges.size());
    if (x == 0 || x > p.k) return false;
    if (static_cast<int>(s.ubound.size()) != x || static_cast<int>(s.s.size()) != x) return false;
    for (int j = 0; j < x; ++j) {
        if (s.ubound[j] < 0 || s.ubound[j] >= p.n || s.ubound[j] == p.rg) return false;
        if (s.s[j] == 0 || (s.s[j] >> p.rg & 1u)) return false;
        int b = p.boundary_count_g(s.s[j]);
        if (b < 1 || b > p.k) return false;
    }
    return true;
}

// z_{alpha,pi}: does the full bijection img realize the state?
inline bool certifies(const Problem& p, const StateM& s, const std::vector<int>& img) {
    const int n = p.n;
    std::vector<int> pre(n, -1);
    for (int u = 0; u < n; ++u) {
        int v = img[u];
        if (v < 0 || v >= n || pre[v] != -1) return false;
        pre[v] = u;
    }
    const Mask sub = p.gsub[s.u];
    // (1) set and vertex images
    if (image_mask(sub, img) != s.t) return false;
    if (img[s.u] != s.v) return false;
    if (img[p.rg] != p.rh) return false;
    auto dedges = p.boundary_edges_h(s.t);
    if (dedges.size() != s.ubound.size() || dedges.size() != s.s.size()) return false;
    for (std::size_t j = 0; j < dedges.size(); ++j) {
        int vj = p.h_endpoint_in(dedges[j], s.t);
        if (img[s.ubound[j]] != vj) return false;
        if (image_mask(s.s[j], img) != p.hside[dedges[j]]) return false;
    }
    // (2) demand edges inside the subtree keep stretch <= ell
    for (const Edge& e : p.g.edges())
        if ((sub >> e.u & 1u) && (sub >> e.v & 1u) && p.dh[img[e.u]][img[e.v]] > p.ell) return false;
    // (3) host edges inside T keep stretch <= ell
    for (const Edge& e : p.h.edges())
        if ((s.t >> e.u & 1u) && (s.t >> e.v & 1u) && p.dg[pre[e.u]][pre[e.v]] > p.ell) return false;
    // (4) single-edge cuts inside the subtree keep <= k crossing host edges
    for (int i = 0; i < p.g.edge_count(); ++i) {
        const Edge& e = p.g.edges()[i];
        if ((sub >> e.u & 1u) && (sub >> e.v & 1u) &&
            p.boundary_count_h(image_mask(p.gside[i], img)) > p.k)
            return false;
    }
    // (5) and symmetrically for host cuts inside T
    for (int i = 0; i < p.h.edge_count(); ++i) {
        const Edge& e = p.h.edges()[i];
        if ((s.t >> e.u & 1u) && (s.t >> e.v & 1u)) {
            Mask preimage = 0;
            Mask hs = p.hside[i];
            while (hs) {
                int b = std::countr_zero(hs);
                hs &= hs - 1;
                preimage |= Mask{1} << pre[b];
            }
            if (p.boundary_count_g(preimage) > p.k) return false;
        }
    }
    return true;
}

struct StateKey {
    Mask t = 0;
    int v = -1;
    std::vector<int> ubound;
    std::vector<Mask> s_inside;

    friend bool operator<(const StateKey& a, const StateKey& b) {
        return std::tie(a.t, a.v, a.ubound, a.s_inside) < std::tie(b.t, b.v, b.ubound, b.s_inside);
    }
};

struct StoredEntry {
    StateKey key;
    std::vector<int> cert;       // full image vector
    std::vector<Mask> full_s;    // materialized cut preimages (catalog sets)
};

struct VertexTable {
    std::vector<StoredEntry> entries;
    std::map<StateKey, int> by_key;
    std::map<Mask, std::vector<int>> by_tmask;
};

// Laminar relation match: the cut preimages must nest exactly like the
// boundary subtrees they map onto.
inline bool same_laminar_relation(Mask a, Mask b, Mask ta, Mask tb) {
    auto rel = [](Mask x, Mask y) {
        if ((x & y) == 0) return 0;
        if ((x & ~y) == 0) return 1;
        if ((y & ~x) == 0) return 2;
        return 3;
    };
    return rel(a, b) == rel(ta, tb);
}

// Completes a partial image (defined on `done_g` -> `done_h`) to a full
// bijection: peel the boundary subtrees innermost-first, mapping each yet
// unassigned slice of S_j onto the matching slice of the subtree under e_j,
// then send the root to the root and everything left in ascending order.
inline bool extend_outside(const Problem& p, const std::vector<int>& dedges,
                           const std::vector<Mask>& full_s, Mask done_g, Mask done_h,
                           std::vector<int>& img) {
    const Mask all = p.n == 32 ? ~Mask{0} : (Mask{1} << p.n) - 1;
    std::vector<int> order(dedges.size());
    for (std::size_t j = 0; j < dedges.size(); ++j) order[j] = static_cast<int>(j);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        int pa = popcount(p.hside[dedges[a]]), pb = popcount(p.hside[dedges[b]]);
        return pa != pb ? pa < pb : a < b;
    });
    auto assign_cell = [&](Mask cg, Mask ch) {
        if (popcount(cg) != popcount(ch)) return false;
        while (cg) {
            int a = std::countr_zero(cg);
            cg &= cg - 1;
            int b = std::countr_zero(ch);
            ch &= ch - 1;
            img[a] = b;
        }
        return true;
    };
    for (int j : order) {
        Mask cell_h = p.hside[dedges[j]] & ~done_h;
        Mask cell_g = full_s[j] & ~done_g;
        if (!assign_cell(cell_g, cell_h)) return false;
        done_h |= cell_h;
        done_g |= cell_g;
    }
    Mask left_g = all & ~done_g;
    Mask left_h = all & ~done_h;
    if (!(left_g >> p.rg & 1u) || !(left_h >> p.rh & 1u)) return false;
    img[p.rg] = p.rh;
    return assign_cell(left_g & ~(Mask{1} << p.rg), left_h & ~(Mask{1} << p.rh));
}

class Dp {
public:
    explicit Dp(std::shared_ptr<const Problem> prob) : p_(std::move(prob)), tables_(p_->n) {}

    void run() {
        const auto& order = p_->g_order;
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            if (*it != p_->rg) process_vertex(*it);
    }

    const std::vector<VertexTable>& tables() const { return tables_; }
    const Problem& problem() const { return *p_; }

    // Tries every way to cover `remaining` by stored child states whose image
    // vertices sit within distance ell of the anchor image; yields the merged
    // partial image over the children's subtrees.
    bool enumerate_cores(const std::vector<int>& children, std::size_t idx, Mask remaining,
                         int anchor_image, std::vector<int>& img,
                         const std::function<bool(std::vector<int>&)>& emit) const {
        if (idx == children.size()) {
            return remaining == 0 ? emit(img) : false;
        }
        int c = children[idx];
        const auto& table = tables_[c];
        for (const auto& [tmask, entry_ids] : table.by_tmask) {
            if ((tmask & remaining) != tmask) continue;
            for (int id : entry_ids) {
                const StoredEntry& entry = table.entries[id];
                if (p_->dh[anchor_image][entry.key.v] > p_->ell) continue;
                Mask csub = p_->gsub[c];
                Mask bits = csub;
                while (bits) {
                    int b = std::countr_zero(bits);
                    bits &= bits - 1;
                    img[b] = entry.cert[b];
                }
                if (enumerate_cores(children, idx + 1, remaining & ~tmask, anchor_image, img, emit))
                    return true;
                bits = csub;
                while (bits) {
                    int b = std::countr_zero(bits);
                    bits &= bits - 1;
                    img[b] = -1;
                }
            }
        }
        return false;
    }

private:
    void process_vertex(int u) {
        const Problem& p = *p_;
        const int size_u = popcount(p.gsub[u]);
        auto it = p.hcat_by_size.find(size_u);
        if (it == p.hcat_by_size.end()) return;
        for (int ci : it->second) {
            const auto& cat = p.hcat[ci];
            Mask tmask = cat.mask;
            auto tbits = mask_to_vec(tmask);
            for (int v : tbits) {
                if (v == p.rh) continue;
                std::vector<int> img(p.n, -1);
                auto on_core = [&](std::vector<int>& core) {
                    core[u] = v;
                    attempt_state(u, tmask, cat.dedges, v, core);
                    core[u] = -1;
                    return false;  // keep enumerating; dedup happens per key
                };
                if (p.gchildren[u].empty()) {
                    if (tmask == (Mask{1} << v)) {
                        std::vector<int> core(p.n, -1);
                        on_core(core);
                    }
                } else {
                    enumerate_cores(p.gchildren[u], 0, tmask & ~(Mask{1} << v), v, img, on_core);
                }
            }
        }
    }

    // Core covers T_u; derive the boundary data it induces, then look for
    // catalog cut-preimages completing it to a verified certificate.
    void attempt_state(int u, Mask tmask, const std::vector<int>& dedges, int v,
                       const std::vector<int>& core) {
        const Problem& p = *p_;
        const Mask sub = p.gsub[u];
        const int x = static_cast<int>(dedges.size());
        std::vector<int> pre(p.n, -1);
        Mask bits = sub;
        while (bits) {
            int b = std::countr_zero(bits);
            bits &= bits - 1;
            pre[core[b]] = b;
        }
        StateKey key;
        key.t = tmask;
        key.v = v;
        key.ubound.resize(x);
        key.s_inside.resize(x);
        for (int j = 0; j < x; ++j) {
            int vj = p.h_endpoint_in(dedges[j], tmask);
            key.ubound[j] = pre[vj];
            Mask inside_h = p.hside[dedges[j]] & tmask;
            Mask inside_g = 0;
            Mask hb = inside_h;
            while (hb) {
                int b = std::countr_zero(hb);
                hb &= hb - 1;
                inside_g |= Mask{1} << pre[b];
            }
            key.s_inside[j] = inside_g;
        }
        auto& table = tables_[u];
        if (table.by_key.count(key)) return;

        // candidate full cut-preimages per boundary edge
        std::vector<std::vector<int>> cands(x);
        for (int j = 0; j < x; ++j) {
            const int want = popcount(p.hside[dedges[j]]);
            for (int gi = 0; gi < static_cast<int>(p.gcat.size()); ++gi) {
                Mask s = p.gcat[gi].mask;
                if ((s & sub) != key.s_inside[j]) continue;
                if (popcount(s) != want) continue;
                cands[j].push_back(gi);
            }
            if (cands[j].empty()) return;
        }
        std::vector<Mask> chosen(x);
        std::vector<int> img(p.n, -1);
        std::function<bool(int)> pick = [&](int j) -> bool {
            if (j == x) {
                bits = sub;
                std::fill(img.begin(), img.end(), -1);
                while (bits) {
                    int b = std::countr_zero(bits);
                    bits &= bits - 1;
                    img[b] = core[b];
                }
                if (!extend_outside(p, dedges, chosen, sub, tmask, img)) return false;
                StateM full{u, tmask, v, key.ubound, chosen};
                if (!certifies(p, full, img)) return false;
                StoredEntry entry{key, img, chosen};
                table.by_key[key] = static_cast<int>(table.entries.size());
                table.by_tmask[tmask].push_back(static_cast<int>(table.entries.size()));
                table.entries.push_back(std::move(entry));
                return true;
            }
            for (int gi : cands[j]) {
                Mask s = p.gcat[gi].mask;
                bool ok = true;
                for (int i = 0; i < j && ok; ++i)
                    ok = same_laminar_relation(chosen[i], s, p.hside[dedges[i]], p.hside[dedges[j]]);
                if (!ok) continue;
                chosen[j] = s;
                if (pick(j + 1)) return true;
            }
            return false;
        };
        pick(0);
    }

    std::shared_ptr<const Problem> p_;
    std::vector<VertexTable> tables_;
};

inline StateM to_mask_state(const AlignmentState& s) {
    StateM m;
    m.u = s.g_vertex;
    m.t = vec_to_mask(s.image_set);
    m.v = s.image_vertex;
    m.ubound = s.boundary_preimages;
    for (const auto& cut : s.cut_preimages) m.s.push_back(vec_to_mask(cut));
    return m;
}

inline AlignmentState from_mask_state(const StateM& m) {
    AlignmentState s;
    s.g_vertex = m.u;
    s.image_set = mask_to_vec(m.t);
    s.image_vertex = m.v;
    s.boundary_preimages = m.ubound;
    for (Mask cut : m.s) s.cut_preimages.push_back(mask_to_vec(cut));
    return s;
}

}  // namespace align_detail

// A rooted alignment instance: fixed roots, bounds k and ell, and the derived
// catalogs. The host edge ordering is the canonical edge order of H.
class AlignmentContext {
public:
    AlignmentContext(const Graph& g, int root_g, const Graph& h, int root_h, int k, int ell)
        : p_(std::make_shared<align_detail::Problem>(g, root_g, h, root_h, k, ell)) {}

    const Graph& demand() const { return p_->g; }
    const Graph& host() const { return p_->h; }
    int demand_root() const { return p_->rg; }
    int host_root() const { return p_->rh; }
    int k() const { return p_->k; }
    int ell() const { return p_->ell; }

    bool state_is_valid(const AlignmentState& s) const {
        return align_detail::state_is_valid(*p_, align_detail::to_mask_state(s));
    }

    // z_{alpha,pi} for a full bijection.
    bool certifies(const AlignmentState& s, const VertexMapping& pi) const {
        auto m = align_detail::to_mask_state(s);
        if (!align_detail::state_is_valid(*p_, m))
            throw std::invalid_argument("certifies: state is not a valid tuple");
        if (!pi.complete()) throw std::invalid_argument("certifies: mapping must be a full bijection");
        return align_detail::certifies(*p_, m, pi.forward());
    }

    // Number of tuples, by the closed-form product over the catalogs.
    unsigned long long state_count() const {
        const auto& p = *p_;
        unsigned long long total = 0;
        const unsigned long long nu = static_cast<unsigned long long>(p.n - 1);
        for (const auto& cat : p.hcat) {
            const int x = static_cast<int>(cat.dedges.size());
            unsigned long long term = nu * nu;  // choices of u and v
            for (int j = 0; j < x; ++j) {
                unsigned long long next = term * nu * static_cast<unsigned long long>(p.gcat.size());
                if (term != 0 && next / term != nu * static_cast<unsigned long long>(p.gcat.size()))
                    throw std::overflow_error("state_count: overflow");
                term = next;
            }
            total += term;
        }
        return total;
    }

    // Streams every tuple (small instances only; the space is the full
    // product over catalogs).
    void enumerate_states(const std::function<void(const AlignmentState&)>& fn) const {
        const auto& p = *p_;
        for (int u = 0; u < p.n; ++u) {
            if (u == p.rg) continue;
            for (const auto& cat : p.hcat) {
                const int x = static_cast<int>(cat.dedges.size());
                align_detail::StateM m;
                m.u = u;
                m.t = cat.mask;
                m.ubound.assign(x, 0);
                m.s.assign(x, 0);
                for (int v = 0; v < p.n; ++v) {
                    if (v == p.rh) continue;
                    m.v = v;
                    std::function<void(int)> rec = [&](int j) {
                        if (j == x) {
                            fn(align_detail::from_mask_state(m));
                            return;
                        }
                        for (int ub = 0; ub < p.n; ++ub) {
                            if (ub == p.rg) continue;
                            m.ubound[j] = ub;
                            for (const auto& gc : p.gcat) {
                                m.s[j] = gc.mask;
                                rec(j + 1);
                            }
                        }
                    };
                    rec(0);
                }
            }
        }
    }

    // Builds a parent certificate from child certificates: child mappings on
    // their subtrees, u -> v, and a fresh outside assignment realizing the
    // parent's cut preimages. Verified by the condition checker before return.
    std::optional<VertexMapping> merge(const AlignmentState& parent,
                                       const std::vector<AlignmentState>& child_states,
                                       const std::vector<VertexMapping>& child_certs) const {
        const auto& p = *p_;
        auto pm = align_detail::to_mask_state(parent);
        if (!align_detail::state_is_valid(p, pm))
            throw std::invalid_argument("merge: parent state is not a valid tuple");
        if (child_states.size() != child_certs.size())
            throw std::invalid_argument("merge: states and certificates must pair up");
        const auto& children = p.gchildren[pm.u];
        if (child_states.size() != children.size())
            throw std::invalid_argument("merge: expected one state per child");
        std::vector<int> img(p.n, -1);
        align_detail::Mask covered = 0;
        for (std::size_t i = 0; i < children.size(); ++i) {
            if (child_states[i].g_vertex != children[i])
                throw std::invalid_argument("merge: child states must follow the child order");
            auto cm = align_detail::to_mask_state(child_states[i]);
            if (cm.t & covered) throw std::invalid_argument("merge: child subtree images overlap");
            covered |= cm.t;
            align_detail::Mask bits = p.gsub[children[i]];
            while (bits) {
                int b = std::countr_zero(bits);
                bits &= bits - 1;
                img[b] = child_certs[i].forward()[b];
            }
        }
        img[pm.u] = pm.v;
        auto dedges = p.boundary_edges_h(pm.t);
        for (std::size_t j = 0; j < dedges.size(); ++j)
            if (align_detail::popcount(pm.s[j]) != align_detail::popcount(p.hside[dedges[j]]))
                throw std::invalid_argument("merge: cut preimage size mismatch");
        if (!align_detail::extend_outside(p, dedges, pm.s, p.gsub[pm.u], pm.t, img))
            return std::nullopt;
        if (!align_detail::certifies(p, pm, img)) return std::nullopt;
        return VertexMapping::from_vector(img);
    }

    std::shared_ptr<const align_detail::Problem> problem() const { return p_; }

private:
    std::shared_ptr<const align_detail::Problem> p_;
};

// The computed table: one stored certificate per positive boundary profile.
// Arbitrary tuples are decided by rebasing the stored certificate onto the
// tuple's own cut preimages and re-running the checker.
class StateTable {
public:
    StateTable(std::shared_ptr<const align_detail::Problem> p, align_detail::Dp dp)
        : p_(std::move(p)), dp_(std::move(dp)) {}

    int positive_count() const {
        int c = 0;
        for (const auto& t : dp_.tables()) c += static_cast<int>(t.entries.size());
        return c;
    }

    // Decides an arbitrary full tuple.
    bool query(const AlignmentState& s) const { return certificate(s).has_value(); }

    std::optional<VertexMapping> certificate(const AlignmentState& s) const {
        const auto& p = *p_;
        auto m = align_detail::to_mask_state(s);
        if (!align_detail::state_is_valid(p, m))
            throw std::invalid_argument("query: state is not a valid tuple");
        auto dedges = p.boundary_edges_h(m.t);
        align_detail::StateKey key;
        key.t = m.t;
        key.v = m.v;
        key.ubound = m.ubound;
        key.s_inside.resize(m.s.size());
        for (std::size_t j = 0; j < m.s.size(); ++j) key.s_inside[j] = m.s[j] & p.gsub[m.u];
        const auto& table = dp_.tables()[m.u];
        auto it = table.by_key.find(key);
        if (it == table.by_key.end()) return std::nullopt;
        const auto& entry = table.entries[it->second];
        std::vector<int> img(p.n, -1);
        align_detail::Mask bits = p.gsub[m.u];
        while (bits) {
            int b = std::countr_zero(bits);
            bits &= bits - 1;
            img[b] = entry.cert[b];
        }
        if (!align_detail::extend_outside(p, dedges, m.s, p.gsub[m.u], m.t, img)) return std::nullopt;
        if (!align_detail::certifies(p, m, img)) return std::nullopt;
        return VertexMapping::from_vector(img);
    }

    // Visits each stored positive as a full tuple with its certificate.
    void for_each_positive(
        const std::function<void(const AlignmentState&, const VertexMapping&)>& fn) const {
        const auto& p = *p_;
        for (int u = 0; u < p.n; ++u) {
            for (const auto& entry : dp_.tables()[u].entries) {
                align_detail::StateM m{u, entry.key.t, entry.key.v, entry.key.ubound, entry.full_s};
                fn(align_detail::from_mask_state(m), VertexMapping::from_vector(entry.cert));
            }
        }
    }

    const align_detail::Dp& dp() const { return dp_; }

private:
    std::shared_ptr<const align_detail::Problem> p_;
    align_detail::Dp dp_;
};

// Bottom-up table computation. Certificates are checked when stored and the
// whole table is re-verified once more on completion.
inline StateTable compute_state_table(const AlignmentContext& ctx) {
    align_detail::Dp dp(ctx.problem());
    dp.run();
    const auto& p = *ctx.problem();
    for (int u = 0; u < p.n; ++u)
        for (const auto& entry : dp.tables()[u].entries) {
            align_detail::StateM m{u, entry.key.t, entry.key.v, entry.key.ubound, entry.full_s};
            if (!align_detail::certifies(p, m, entry.cert))
                throw std::logic_error("state table: stored certificate failed re-verification");
        }
    return StateTable(ctx.problem(), std::move(dp));
}

namespace align_detail {

inline std::optional<std::vector<int>> align_rooted(const AlignmentContext& ctx) {
    const Problem& p = *ctx.problem();
    Dp dp(ctx.problem());
    dp.run();
    const Mask all = (p.n >= 32) ? ~Mask{0} : (Mask{1} << p.n) - 1;
    std::vector<int> img(p.n, -1);
    std::optional<std::vector<int>> found;
    auto emit = [&](std::vector<int>& core) {
        core[p.rg] = p.rh;
        if (mapping_respects_bounds(p.g, p.h, core, p.k, p.ell)) {
            found = core;
            core[p.rg] = -1;
            return true;
        }
        core[p.rg] = -1;
        return false;
    };
    dp.enumerate_cores(p.gchildren[p.rg], 0, all & ~(Mask{1} << p.rh), p.rh, img, emit);
    return found;
}

}  // namespace align_detail

// The full alignment search: fixes the demand root at a centroid, tries every
// host root, and returns the first mapping passing the four bound conditions.
// Host roots are independent, so jobs > 1 evaluates them concurrently and the
// lowest successful root still wins.
inline std::optional<VertexMapping> align_trees(const Graph& g, const Graph& h, int k, int ell,
                                                int jobs = 1) {
    if (!is_tree(g) || !is_tree(h)) throw std::invalid_argument("align_trees: both graphs must be trees");
    if (g.vertex_count() != h.vertex_count())
        throw std::invalid_argument("align_trees: vertex sets must match");
    const int n = g.vertex_count();
    if (n == 1) return VertexMapping::identity(1);
    const int rg = tree_centroid(g);
    auto try_root = [&](int rh) {
        AlignmentContext ctx(g, rg, h, rh, k, ell);
        return align_detail::align_rooted(ctx);
    };
    if (jobs <= 1) {
        for (int rh = 0; rh < n; ++rh)
            if (auto r = try_root(rh)) return VertexMapping::from_vector(*r);
        return std::nullopt;
    }
    std::vector<std::future<std::optional<std::vector<int>>>> futs;
    for (int rh = 0; rh < n; ++rh) futs.push_back(std::async(std::launch::async, try_root, rh));
    std::optional<VertexMapping> found;
    for (int rh = 0; rh < n; ++rh) {
        auto r = futs[rh].get();
        if (r && !found) found = VertexMapping::from_vector(*r);
    }
    return found;
}

struct CertifyResult {
    VertexMapping mapping;  // demand vertex -> host vertex
    int k = 0;
    int ell = 0;
    double kappa = 0.0;  // spectrally measured kappa(G, pi(H))
};

// The host graph carried onto the demand labels along the mapping: host edge
// (a,b) becomes (pi^{-1}(a), pi^{-1}(b)).
inline Graph aligned_host(const Graph& h, const VertexMapping& pi) {
    return apply_permutation(h, pi.inverted());
}

// Walks the (k, ell) grid in increasing k*ell order; the first feasible pair
// yields a mapping whose measured condition number is at most (k*ell)^2.
inline std::optional<CertifyResult> srgi_certify(const Graph& g, const Graph& h, double kappa_budget,
                                                 double tol = kDefaultTol, int jobs = 1) {
    if (kappa_budget < 1.0) throw std::invalid_argument("srgi_certify: budget must be >= 1");
    const int cap = static_cast<int>(std::ceil(kappa_budget));
    std::vector<std::pair<int, int>> grid;
    for (int k = 1; k <= cap; ++k)
        for (int ell = 1; ell <= cap; ++ell) grid.push_back({k, ell});
    std::sort(grid.begin(), grid.end(), [](auto a, auto b) {
        int pa = a.first * a.second, pb = b.first * b.second;
        return pa != pb ? pa < pb : a < b;
    });
    for (auto [k, ell] : grid) {
        auto pi = align_trees(g, h, k, ell, jobs);
        if (!pi) continue;
        CertifyResult r;
        r.mapping = *pi;
        r.k = k;
        r.ell = ell;
        r.kappa = condition(g, aligned_host(h, *pi), tol).kappa;
        const double bound = static_cast<double>(k) * ell;
        if (r.kappa > bound * bound + 1e-6)
            throw std::logic_error("srgi_certify: certified bound violated by the spectral measure");
        return r;
    }
    return std::nullopt;
}

}  // namespace sgsim
