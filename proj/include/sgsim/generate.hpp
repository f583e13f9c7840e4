#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "sgsim/graph.hpp"

namespace sgsim {

// Seeded generator with portable uniform draws (std distributions are not
// bit-stable across standard libraries; outputs here feed determinism tests).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("rng: empty range");
        std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % bound;
    }

    int index(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

inline Graph make_path(int n) {
    if (n < 1) throw std::invalid_argument("path: n must be >= 1");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1, 1.0);
    return Graph(n, std::move(edges));
}

inline Graph make_cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle: n must be >= 3");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1, 1.0);
    edges.emplace_back(n - 1, 0, 1.0);
    return Graph(n, std::move(edges));
}

// Cycle visiting order[0], order[1], ..., order[n-1], back to order[0].
inline Graph make_cycle_through(const std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    if (n < 3) throw std::invalid_argument("cycle: n must be >= 3");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(order[i], order[(i + 1) % n], 1.0);
    return Graph(n, std::move(edges));
}

inline Graph make_star(int n) {
    if (n < 1) throw std::invalid_argument("star: n must be >= 1");
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back(0, i, 1.0);
    return Graph(n, std::move(edges));
}

// Sequential random-parent attachment; parents drawn among vertices with
// remaining degree budget.
inline Graph make_random_tree(int n, int max_degree, Rng& rng) {
    if (n < 1) throw std::invalid_argument("random_tree: n must be >= 1");
    if (n > 2 && max_degree < 2)
        throw std::invalid_argument("random_tree: max_degree < 2 is infeasible for n > 2");
    if (n == 2 && max_degree < 1)
        throw std::invalid_argument("random_tree: max_degree < 1 is infeasible for n = 2");
    std::vector<Edge> edges;
    std::vector<int> deg(n, 0);
    for (int i = 1; i < n; ++i) {
        std::vector<int> candidates;
        for (int p = 0; p < i; ++p)
            if (deg[p] < max_degree) candidates.push_back(p);
        if (candidates.empty()) throw std::invalid_argument("random_tree: degree budget exhausted");
        int p = candidates[rng.index(static_cast<int>(candidates.size()))];
        edges.emplace_back(p, i, 1.0);
        ++deg[p];
        ++deg[i];
    }
    return Graph(n, std::move(edges));
}

inline VertexMapping make_random_permutation(int n, Rng& rng) {
    std::vector<int> image(n);
    for (int i = 0; i < n; ++i) image[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(image[i], image[rng.index(i + 1)]);
    return VertexMapping::from_vector(image);
}

// Random connected induced subgrid with max degree 3: grows a point set one
// neighboring cell at a time, rejecting cells that would push any degree past 3.
inline CubicSubgrid make_random_subgrid(int n, Rng& rng, int max_attempts = 200) {
    if (n < 1) throw std::invalid_argument("random_subgrid: n must be >= 1");
    const std::pair<int, int> dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::set<std::pair<int, int>> cells = {{0, 0}};
        auto degree_of = [&](std::pair<int, int> c) {
            int d = 0;
            for (auto [dx, dy] : dirs) d += cells.count({c.first + dx, c.second + dy});
            return d;
        };
        bool stuck = false;
        while (static_cast<int>(cells.size()) < n) {
            std::vector<std::pair<int, int>> frontier;
            for (const auto& c : cells)
                for (auto [dx, dy] : dirs) {
                    std::pair<int, int> cand{c.first + dx, c.second + dy};
                    if (cells.count(cand)) continue;
                    if (degree_of(cand) > 3) continue;
                    bool ok = true;
                    for (auto [ex, ey] : dirs) {
                        std::pair<int, int> nb{cand.first + ex, cand.second + ey};
                        if (cells.count(nb) && degree_of(nb) >= 3) ok = false;
                    }
                    if (ok) frontier.push_back(cand);
                }
            if (frontier.empty()) {
                stuck = true;
                break;
            }
            std::sort(frontier.begin(), frontier.end());
            frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
            cells.insert(frontier[rng.index(static_cast<int>(frontier.size()))]);
        }
        if (!stuck) return make_subgrid({cells.begin(), cells.end()});
    }
    throw std::runtime_error("random_subgrid: failed to grow a cubic subgrid");
}

}  // namespace sgsim
