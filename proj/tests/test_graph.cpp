#include <doctest.h>

#include "sgsim/generate.hpp"
#include "sgsim/graph.hpp"
#include "test_util.hpp"

using namespace sgsim;

TEST_CASE("laplacian matches the definition") {
    Graph p3 = make_path(3);
    Matrix l = laplacian(p3);
    Matrix expect(3, 3);
    expect << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    CHECK((l - expect).norm() == 0.0);

    Graph single(2, {{0, 1, 2.0}});
    Matrix l2 = laplacian(single);
    CHECK(l2(0, 0) == 2.0);
    CHECK(l2(0, 1) == -2.0);
    CHECK(l2(1, 0) == -2.0);
    CHECK(l2(1, 1) == 2.0);

    Graph empty(3, {});
    CHECK(laplacian(empty).norm() == 0.0);

    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = test_util::random_connected_graph(6, 0.3, rng);
        Matrix lg = laplacian(g);
        CHECK(lg.rowwise().sum().norm() < 1e-12);
        CHECK((lg - lg.transpose()).norm() == 0.0);
    }
}

TEST_CASE("quadratic form equals x^T L x and the sum over edges") {
    Graph p3 = make_path(3);
    CHECK(quadratic_form(p3, std::vector<double>{0, 1, 2}) == 2.0);
    CHECK(quadratic_form(p3, std::vector<double>{5, 5, 5}) == 0.0);
    Graph c3 = make_cycle(3);
    CHECK(quadratic_form(c3, std::vector<double>{1, 0, -1}) == 6.0);
    CHECK_THROWS_AS(quadratic_form(p3, std::vector<double>{1, 2}), std::invalid_argument);

    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Graph g = test_util::random_connected_graph(7, 0.4, rng);
        Vector x = test_util::random_centered_vector(7, rng);
        double direct = quadratic_form(g, x);
        double via_matrix = x.dot(laplacian(g) * x);
        CHECK(direct >= 0.0);
        CHECK(direct == doctest::Approx(via_matrix).epsilon(1e-12));
    }
}

TEST_CASE("cut edges and the indicator identity") {
    Graph p3 = make_path(3);
    auto cut = cut_edges(p3, {0});
    REQUIRE(cut.size() == 1);
    CHECK(cut[0] == Edge(0, 1));
    CHECK(cut_edges(p3, {0, 1, 2}).empty());
    Graph c4 = make_cycle(4);
    CHECK(cut_edges(c4, {0, 1}).size() == 2);

    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = test_util::random_connected_graph(6, 0.5, rng);
        for (int mask = 0; mask < 64; ++mask) {
            std::vector<int> s;
            std::vector<double> x(6, 0.0);
            for (int v = 0; v < 6; ++v)
                if (mask >> v & 1) {
                    s.push_back(v);
                    x[v] = 1.0;
                }
            CHECK(quadratic_form(g, x) == cut_weight(g, s));
        }
    }
}

TEST_CASE("subtree under edge excludes the root and cuts exactly that edge") {
    RootedTree p3(make_path(3), 0);
    CHECK(p3.subtree_under_edge(Edge(1, 2)) == std::vector<int>{2});
    CHECK(p3.subtree_under_edge(Edge(0, 1)) == std::vector<int>{1, 2});
    RootedTree star(make_star(4), 0);
    CHECK(star.subtree_under_edge(Edge(0, 3)) == std::vector<int>{3});
    CHECK_THROWS_AS(p3.subtree_under_edge(Edge(0, 2)), std::invalid_argument);

    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        Graph t = make_random_tree(8, 4, rng);
        RootedTree rt(t, rng.index(8));
        for (const Edge& e : t.edges()) {
            auto side = rt.subtree_under_edge(e);
            auto cut = cut_edges(t, side);
            REQUIRE(cut.size() == 1);
            CHECK(cut[0].u == e.u);
            CHECK(cut[0].v == e.v);
            CHECK(std::find(side.begin(), side.end(), rt.root()) == side.end());
        }
    }
}

TEST_CASE("tree distance") {
    Graph p4 = make_path(4);
    CHECK(tree_distance(p4, 0, 3) == 3);
    CHECK(tree_distance(p4, 2, 2) == 0);
    Graph star = make_star(4);
    CHECK(tree_distance(star, 1, 3) == 2);
    Graph disconnected(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(tree_distance(disconnected, 0, 3), std::invalid_argument);
}

TEST_CASE("permutations relabel and preserve structure") {
    Graph p3 = make_path(3);
    CHECK(apply_permutation(p3, VertexMapping::identity(3)) == p3);
    Graph rev = apply_permutation(p3, VertexMapping::from_vector({2, 1, 0}));
    CHECK(rev == p3);

    Graph c4 = make_cycle(4);
    Graph rot = apply_permutation(c4, VertexMapping::from_vector({1, 2, 3, 0}));
    CHECK(rot == c4);

    VertexMapping partial(3);
    partial.assign(0, 1);
    CHECK_THROWS_AS(apply_permutation(p3, partial), std::invalid_argument);

    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        Graph g = test_util::random_connected_graph(7, 0.4, rng);
        VertexMapping pi = make_random_permutation(7, rng);
        Graph gp = apply_permutation(g, pi);
        Vector x = test_util::random_centered_vector(7, rng);
        Vector composed(7);
        for (int v = 0; v < 7; ++v) composed[v] = x[pi.image(v)];
        CHECK(quadratic_form(gp, x) == doctest::Approx(quadratic_form(g, composed)).epsilon(1e-12));
    }
}

TEST_CASE("vertex mapping bookkeeping") {
    VertexMapping m(4);
    m.assign(0, 2);
    m.assign(1, 3);
    CHECK(m.image(0) == 2);
    CHECK(m.preimage(3) == 1);
    CHECK(!m.complete());
    CHECK_THROWS_AS(m.assign(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(m.assign(2, 2), std::invalid_argument);
    m.assign(2, 0);
    m.assign(3, 1);
    CHECK(m.complete());
    CHECK(m.inverted().image(2) == 0);
}

TEST_CASE("generators") {
    Graph c5 = make_cycle(5);
    CHECK(c5.edge_count() == 5);
    for (int v = 0; v < 5; ++v) CHECK(c5.degree(v) == 2);

    auto square = make_subgrid({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK(square.graph.edge_count() == 4);
    CHECK(is_connected(square.graph));
    for (int v = 0; v < 4; ++v) CHECK(square.graph.degree(v) == 2);

    CHECK_THROWS_AS(make_subgrid({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}), std::invalid_argument);
    CHECK_THROWS_AS(make_subgrid({{0, 0}, {0, 0}}), std::invalid_argument);

    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Graph t = make_random_tree(9, 3, rng);
        CHECK(is_tree(t));
        CHECK(max_degree(t) <= 3);
    }
    Rng a(42), b(42);
    CHECK(make_random_tree(8, 3, a) == make_random_tree(8, 3, b));

    Rng c(1);
    CHECK_THROWS_AS(make_random_tree(5, 1, c), std::invalid_argument);
    CHECK_THROWS_AS(make_cycle(2), std::invalid_argument);

    for (int trial = 0; trial < 10; ++trial) {
        auto sub = make_random_subgrid(8, c);
        CHECK(sub.graph.vertex_count() == 8);
        CHECK(is_connected(sub.graph));
        CHECK(max_degree(sub.graph) <= 3);
    }
}

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(Graph(2, {{0, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 2, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 1, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {{0, 1, -1.0}}), std::invalid_argument);
}

TEST_CASE("centroid and rooted tree order") {
    Graph p5 = make_path(5);
    CHECK(tree_centroid(p5) == 2);
    RootedTree rt(p5, 2);
    CHECK(rt.bfs_order().front() == 2);
    CHECK(rt.subtree_vertices(1) == std::vector<int>{0, 1});
}
