#pragma once

#include <Eigen/Dense>

#include "sgsim/generate.hpp"
#include "sgsim/graph.hpp"

namespace test_util {

using sgsim::Graph;
using sgsim::Matrix;
using sgsim::Vector;

// Independent route to sigma(G,H): restrict the pencil to an explicit basis of
// the complement of the all-ones vector and run a generalized symmetric-definite
// eigensolve. No pseudo-inverse square roots involved.
inline double basis_support(const Graph& g, const Graph& h) {
    const int n = g.vertex_count();
    Matrix basis = Matrix::Zero(n, n - 1);
    for (int i = 0; i < n - 1; ++i) {
        basis(i, i) = 1.0;
        basis(n - 1, i) = -1.0;
    }
    Matrix a = basis.transpose() * sgsim::laplacian(g) * basis;
    Matrix b = basis.transpose() * sgsim::laplacian(h) * basis;
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(a, b);
    return es.eigenvalues().maxCoeff();
}

inline Graph random_connected_graph(int n, double extra_edge_prob, sgsim::Rng& rng) {
    Graph tree = sgsim::make_random_tree(n, n, rng);
    std::vector<sgsim::Edge> edges = tree.edges();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!tree.has_edge(u, v) && rng.unit() < extra_edge_prob) edges.emplace_back(u, v, 1.0);
    return Graph(n, std::move(edges));
}

inline Vector random_centered_vector(int n, sgsim::Rng& rng) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.unit() * 2.0 - 1.0;
    x.array() -= x.mean();
    return x;
}

}  // namespace test_util
