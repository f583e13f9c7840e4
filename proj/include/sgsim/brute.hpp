#pragma once

#include <atomic>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <vector>

#include "sgsim/embedding.hpp"
#include "sgsim/graph.hpp"
#include "sgsim/spectral.hpp"

namespace sgsim {

// Exponential-time exact oracles. Enumeration is lexicographic; with jobs > 1
// the permutation space is partitioned by the first image value and merged by
// block order, so results do not depend on the worker count.
struct BruteOptions {
    int limit = 9;      // hard n cap; n! permutations beyond this are not worth waiting for
    bool prune = true;  // sound rejection filters only; disable for audit runs
    int jobs = 1;
    double tol = kDefaultTol;
};

namespace detail {

inline void check_brute_inputs(const Graph& g, const Graph& h, int limit, bool need_connected) {
    if (g.vertex_count() != h.vertex_count())
        throw std::invalid_argument("brute: graphs must share the vertex count");
    if (g.vertex_count() > limit)
        throw std::invalid_argument("brute: vertex count exceeds the configured limit");
    if (need_connected && (!is_connected(g) || !is_connected(h)))
        throw std::invalid_argument("brute: both graphs must be connected");
}

// Sorted-degree compatibility: a bijection with deg_H(w) <= deg_G(img(w)) for
// every w exists iff the ascending degree sequences compare pointwise.
inline bool degree_sequences_compatible(const Graph& g, const Graph& h) {
    std::vector<int> dg(g.vertex_count()), dh(h.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        dg[v] = g.degree(v);
        dh[v] = h.degree(v);
    }
    std::sort(dg.begin(), dg.end());
    std::sort(dh.begin(), dh.end());
    for (std::size_t i = 0; i < dg.size(); ++i)
        if (dh[i] > dg[i]) return false;
    return true;
}

// Canonical key of the relabeled edge set, for memoizing spectra across
// permutations that produce the same image graph.
inline std::vector<std::uint16_t> image_key(const Graph& h, const std::vector<int>& image) {
    std::vector<std::uint16_t> key;
    key.reserve(h.edges().size());
    const int n = h.vertex_count();
    for (const Edge& e : h.edges()) {
        int a = image[e.u], b = image[e.v];
        if (a > b) std::swap(a, b);
        key.push_back(static_cast<std::uint16_t>(a * n + b));
    }
    std::sort(key.begin(), key.end());
    return key;
}

inline bool image_is_subgraph(const Graph& g, const Graph& h, const std::vector<int>& image) {
    for (const Edge& e : h.edges()) {
        if (!g.has_edge(image[e.u], image[e.v])) return false;
        if (g.edge_weight(image[e.u], image[e.v]) < e.w) return false;
    }
    return true;
}

template <typename Fn>
inline void for_each_permutation_block(int n, int first, Fn&& fn) {
    std::vector<int> perm(n);
    perm[0] = first;
    int next = 0;
    for (int i = 1; i < n; ++i) {
        if (next == first) ++next;
        perm[i] = next++;
    }
    do {
        fn(perm);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
}

}  // namespace detail

// Does some permutation pi make pi(H) precede G? Returns the lexicographically
// smallest qualifying pi (sigma(pi(H), G) <= 1 + tol), or nothing.
inline std::optional<VertexMapping> brute_sgd(const Graph& g, const Graph& h,
                                              const BruteOptions& opts = {}) {
    detail::check_brute_inputs(g, h, opts.limit, true);
    const int n = g.vertex_count();
    const bool unit = g.unit_weights() && h.unit_weights();
    // Degree rejection needs the integer cut gap to clear the tolerance, and
    // compares weighted degrees only through unit weights.
    const bool degree_filters = opts.prune && unit && opts.tol < 1.0 / (2.0 * std::max(n, 1));
    if (degree_filters && !detail::degree_sequences_compatible(g, h)) return std::nullopt;

    SupportSolver on_g(g);
    std::vector<int> gdeg(n);
    for (int v = 0; v < n; ++v) gdeg[v] = g.degree(v);
    const bool memoizable = opts.prune && unit;

    auto run_block = [&](int first) -> std::optional<std::vector<int>> {
        std::optional<std::vector<int>> found;
        std::map<std::vector<std::uint16_t>, double> memo;
        detail::for_each_permutation_block(n, first, [&](const std::vector<int>& perm) {
            if (found) return;
            if (degree_filters) {
                for (int a = 0; a < n; ++a)
                    if (h.degree(a) > gdeg[perm[a]]) return;
            }
            if (opts.prune && detail::image_is_subgraph(g, h, perm)) {
                found = perm;
                return;
            }
            double sigma;
            if (memoizable) {
                auto key = detail::image_key(h, perm);
                auto it = memo.find(key);
                sigma = it != memo.end() ? it->second : (memo[key] = on_g.sigma_of_mapped(h, perm));
            } else {
                sigma = on_g.sigma_of_mapped(h, perm);
            }
            if (sigma <= 1.0 + opts.tol) found = perm;
        });
        return found;
    };

    if (opts.jobs <= 1) {
        for (int first = 0; first < n; ++first)
            if (auto r = run_block(first)) return VertexMapping::from_vector(*r);
        return std::nullopt;
    }
    std::atomic<int> best_block{n};
    std::vector<std::future<std::optional<std::vector<int>>>> futs;
    for (int first = 0; first < n; ++first)
        futs.push_back(std::async(std::launch::async, [&, first]() -> std::optional<std::vector<int>> {
            if (first > best_block.load()) return std::nullopt;
            auto r = run_block(first);
            if (r) {
                int cur = best_block.load();
                while (first < cur && !best_block.compare_exchange_weak(cur, first)) {
                }
            }
            return r;
        }));
    for (int first = 0; first < n; ++first)
        if (auto r = futs[first].get()) return VertexMapping::from_vector(*r);
    return std::nullopt;
}

struct SrgiResult {
    VertexMapping mapping;
    double kappa_min = 0.0;
};

// argmin over all pi of kappa(G, pi(H)); ties broken toward the
// lexicographically smallest permutation.
inline SrgiResult brute_srgi(const Graph& g, const Graph& h, const BruteOptions& opts = {}) {
    detail::check_brute_inputs(g, h, opts.limit, true);
    const int n = g.vertex_count();
    SupportSolver on_g(g);
    // memoization keys edge sets, so it is only valid when weights carry no
    // information
    const bool memoizable = opts.prune && g.unit_weights() && h.unit_weights();

    struct BlockResult {
        double kappa = std::numeric_limits<double>::infinity();
        std::vector<int> perm;
    };
    auto run_block = [&](int first) {
        BlockResult best;
        std::map<std::vector<std::uint16_t>, double> memo;
        detail::for_each_permutation_block(n, first, [&](const std::vector<int>& perm) {
            double kappa;
            auto eval = [&]() {
                auto [lmax, lmin] = on_g.extreme_eigenvalues(h, &perm);
                return lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
            };
            if (memoizable) {
                auto key = detail::image_key(h, perm);
                auto it = memo.find(key);
                kappa = it != memo.end() ? it->second : (memo[key] = eval());
            } else {
                kappa = eval();
            }
            if (kappa < best.kappa) {
                best.kappa = kappa;
                best.perm = perm;
            }
        });
        return best;
    };

    std::vector<BlockResult> results(n);
    if (opts.jobs <= 1) {
        for (int first = 0; first < n; ++first) results[first] = run_block(first);
    } else {
        std::vector<std::future<BlockResult>> futs;
        for (int first = 0; first < n; ++first)
            futs.push_back(std::async(std::launch::async, run_block, first));
        for (int first = 0; first < n; ++first) results[first] = futs[first].get();
    }
    const BlockResult* best = &results[0];
    for (int first = 1; first < n; ++first)
        if (results[first].kappa < best->kappa) best = &results[first];
    return {VertexMapping::from_vector(best->perm), best->kappa};
}

struct FeasibleOptions {
    int limit = 12;  // the conditions are integer-valued, so larger n stays exact
    bool prune = true;
    int jobs = 1;
};

namespace detail {

struct FeasibleSearch {
    const Graph& g;
    const Graph& h;
    int k, ell, n;
    std::vector<std::vector<int>> dg, dh;
    std::vector<int> order;  // G vertices, each adjacent to an earlier one

    FeasibleSearch(const Graph& g_, const Graph& h_, int k_, int ell_)
        : g(g_), h(h_), k(k_), ell(ell_), n(g_.vertex_count()),
          dg(all_pairs_distances(g_)), dh(all_pairs_distances(h_)) {
        RootedTree rooted(g, 0);
        order = rooted.bfs_order();
    }

    bool extend(std::vector<int>& image, std::vector<char>& used, std::size_t i,
                std::optional<std::vector<int>>& found) const {
        if (i == order.size()) {
            if (mapping_respects_bounds(g, h, image, k, ell)) {
                found = image;
                return true;
            }
            return false;
        }
        int u = order[i];
        for (int c = 0; c < n; ++c) {
            if (used[c]) continue;
            bool ok = true;
            for (auto [w, wt] : g.neighbors(u))
                if (image[w] >= 0 && dh[c][image[w]] > ell) ok = false;
            if (ok)
                for (auto [b, wt] : h.neighbors(c)) {
                    int p = preimage_of(image, b);
                    if (p >= 0 && dg[u][p] > ell) ok = false;
                }
            if (!ok) continue;
            image[u] = c;
            used[c] = 1;
            if (extend(image, used, i + 1, found)) return true;
            image[u] = -1;
            used[c] = 0;
        }
        return false;
    }

    static int preimage_of(const std::vector<int>& image, int b) {
        for (std::size_t u = 0; u < image.size(); ++u)
            if (image[u] == b) return static_cast<int>(u);
        return -1;
    }
};

}  // namespace detail

// Exhaustive search for a mapping satisfying all four stretch/cut conditions.
// The default path is a backtracking search that discards a partial mapping
// only when an already-determined edge stretch exceeds ell, which no
// completion can repair; prune=false falls back to plain enumeration.
inline std::optional<VertexMapping> brute_mapping_feasible(const Graph& g, const Graph& h, int k,
                                                           int ell,
                                                           const FeasibleOptions& opts = {}) {
    if (!is_tree(g) || !is_tree(h))
        throw std::invalid_argument("brute_mapping_feasible: both graphs must be trees");
    detail::check_brute_inputs(g, h, opts.limit, false);
    if (k < 1 || ell < 1) throw std::invalid_argument("brute_mapping_feasible: k and ell must be >= 1");
    const int n = g.vertex_count();

    if (!opts.prune) {
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        do {
            if (mapping_respects_bounds(g, h, perm, k, ell)) return VertexMapping::from_vector(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return std::nullopt;
    }

    detail::FeasibleSearch search(g, h, k, ell);
    auto run_block = [&](int first_image) -> std::optional<std::vector<int>> {
        std::vector<int> image(n, -1);
        std::vector<char> used(n, 0);
        image[search.order[0]] = first_image;
        used[first_image] = 1;
        std::optional<std::vector<int>> found;
        search.extend(image, used, 1, found);
        return found;
    };

    if (opts.jobs <= 1) {
        for (int first = 0; first < n; ++first)
            if (auto r = run_block(first)) return VertexMapping::from_vector(*r);
        return std::nullopt;
    }
    std::vector<std::future<std::optional<std::vector<int>>>> futs;
    for (int first = 0; first < n; ++first)
        futs.push_back(std::async(std::launch::async, run_block, first));
    for (int first = 0; first < n; ++first)
        if (auto r = futs[first].get()) return VertexMapping::from_vector(*r);
    return std::nullopt;
}

}  // namespace sgsim
