#pragma once

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "sgsim/graph.hpp"

namespace sgsim {

// Backtracking search for a Hamiltonian cycle; returns the vertex order or
// nothing. Deterministic: extends along ascending neighbor ids.
inline std::optional<std::vector<int>> find_hamiltonian_cycle(const Graph& g) {
    const int n = g.vertex_count();
    if (n < 3 || !is_connected(g)) return std::nullopt;
    for (int v = 0; v < n; ++v)
        if (g.degree(v) < 2) return std::nullopt;
    std::vector<int> path{0};
    std::vector<char> used(n, 0);
    used[0] = 1;
    std::optional<std::vector<int>> found;
    std::function<bool()> rec = [&]() {
        if (static_cast<int>(path.size()) == n) {
            if (g.has_edge(path.back(), 0)) {
                found = path;
                return true;
            }
            return false;
        }
        for (auto [w, wt] : g.neighbors(path.back())) {
            if (used[w]) continue;
            used[w] = 1;
            path.push_back(w);
            if (rec()) return true;
            path.pop_back();
            used[w] = 0;
        }
        return false;
    };
    rec();
    return found;
}

inline bool has_hamiltonian_cycle(const Graph& g) { return find_hamiltonian_cycle(g).has_value(); }

namespace shape_detail {

using Points = std::vector<std::pair<int, int>>;

inline Points normalized(Points pts) {
    int mx = pts[0].first, my = pts[0].second;
    for (auto [x, y] : pts) {
        mx = std::min(mx, x);
        my = std::min(my, y);
    }
    for (auto& [x, y] : pts) {
        x -= mx;
        y -= my;
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

// Lexicographically smallest normalized form over the 8 grid symmetries.
inline Points canonical(const Points& pts) {
    Points best;
    for (int s = 0; s < 8; ++s) {
        Points t = pts;
        for (auto& [x, y] : t) {
            if (s & 1) x = -x;
            if (s & 2) y = -y;
            if (s & 4) std::swap(x, y);
        }
        t = normalized(std::move(t));
        if (best.empty() || t < best) best = std::move(t);
    }
    return best;
}

inline bool degrees_cubic(const std::set<std::pair<int, int>>& cells) {
    static constexpr std::array<std::pair<int, int>, 4> dirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    for (const auto& c : cells) {
        int d = 0;
        for (auto [dx, dy] : dirs) d += cells.count({c.first + dx, c.second + dy});
        if (d > 3) return false;
    }
    return true;
}

}  // namespace shape_detail

// Every connected induced subgrid shape with max degree 3 on exactly n cells,
// up to translation, rotation and reflection. Grown cell by cell; any such
// shape minus a non-cut cell is again such a shape, so the growth is
// exhaustive.
inline std::vector<std::vector<std::pair<int, int>>> enumerate_subgrid_shapes(int n) {
    using shape_detail::Points;
    if (n < 1) throw std::invalid_argument("subgrid shapes: n must be >= 1");
    static constexpr std::array<std::pair<int, int>, 4> dirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    std::set<Points> current{Points{{0, 0}}};
    for (int size = 1; size < n; ++size) {
        std::set<Points> next;
        for (const Points& shape : current) {
            std::set<std::pair<int, int>> cells(shape.begin(), shape.end());
            for (const auto& c : shape)
                for (auto [dx, dy] : dirs) {
                    std::pair<int, int> cand{c.first + dx, c.second + dy};
                    if (cells.count(cand)) continue;
                    cells.insert(cand);
                    if (shape_detail::degrees_cubic(cells))
                        next.insert(shape_detail::canonical(Points(cells.begin(), cells.end())));
                    cells.erase(cand);
                }
        }
        current = std::move(next);
    }
    return {current.begin(), current.end()};
}

}  // namespace sgsim
