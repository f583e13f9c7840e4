#include <doctest.h>

#include <set>

#include "sgsim/brute.hpp"
#include "sgsim/generate.hpp"
#include "sgsim/tree_align.hpp"
#include "test_util.hpp"

using namespace sgsim;

namespace {

// All certificates of a state by direct enumeration over bijections fixing
// root -> root.
std::vector<std::vector<int>> all_certificates(const AlignmentContext& ctx,
                                               const AlignmentState& s) {
    const int n = ctx.demand().vertex_count();
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (v != ctx.host_root()) rest.push_back(v);
    std::vector<std::vector<int>> certs;
    std::vector<int> positions;
    for (int u = 0; u < n; ++u)
        if (u != ctx.demand_root()) positions.push_back(u);
    std::sort(rest.begin(), rest.end());
    do {
        std::vector<int> img(n, -1);
        img[ctx.demand_root()] = ctx.host_root();
        for (std::size_t i = 0; i < positions.size(); ++i) img[positions[i]] = rest[i];
        if (ctx.certifies(s, VertexMapping::from_vector(img))) certs.push_back(img);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return certs;
}

std::vector<int> image_of_set(const std::vector<int>& img, const std::vector<int>& set) {
    std::vector<int> out;
    for (int v : set) out.push_back(img[v]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("identical trees align at k = ell = 1") {
    Rng rng(211);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 4 + rng.index(5);
        Graph t = make_random_tree(n, 3, rng);
        auto r = align_trees(t, t, 1, 1);
        REQUIRE(r.has_value());
        CHECK(mapping_respects_bounds(t, t, *r, 1, 1));
    }
}

TEST_CASE("isomorphic relabelings align at k = ell = 1") {
    Rng rng(223);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 5 + rng.index(4);
        Graph t = make_random_tree(n, 3, rng);
        Graph h = apply_permutation(t, make_random_permutation(n, rng));
        auto r = align_trees(t, h, 1, 1);
        REQUIRE(r.has_value());
        CHECK(mapping_respects_bounds(t, h, *r, 1, 1));
    }
}

TEST_CASE("path and star do not align with unit bounds") {
    Graph p4 = make_path(4);
    Graph star(4, {{1, 0}, {1, 2}, {1, 3}});
    CHECK(!align_trees(p4, star, 1, 1).has_value());
    CHECK(!brute_mapping_feasible(p4, star, 1, 1).has_value());
}

TEST_CASE("alignment feasibility matches the brute oracle") {
    Rng rng(227);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 4 + rng.index(5);
        Graph g = make_random_tree(n, 3, rng);
        Graph h = apply_permutation(make_random_tree(n, 3, rng), make_random_permutation(n, rng));
        for (int k = 1; k <= 2; ++k)
            for (int ell = 1; ell <= 2; ++ell) {
                auto dp = align_trees(g, h, k, ell);
                auto oracle = brute_mapping_feasible(g, h, k, ell);
                CHECK(dp.has_value() == oracle.has_value());
                if (dp) CHECK(mapping_respects_bounds(g, h, *dp, k, ell));
            }
    }
}

TEST_CASE("aligned mappings meet the spectral bound") {
    Rng rng(229);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 5 + rng.index(4);
        Graph g = make_random_tree(n, 3, rng);
        Graph h = apply_permutation(make_random_tree(n, 3, rng), make_random_permutation(n, rng));
        for (int k = 1; k <= 2; ++k)
            for (int ell = 1; ell <= 2; ++ell) {
                auto dp = align_trees(g, h, k, ell);
                if (!dp) continue;
                Graph hp = aligned_host(h, *dp);
                double bound = static_cast<double>(k) * ell;
                CHECK(support(g, hp).sigma <= bound + 1e-6);
                CHECK(support(hp, g).sigma <= bound + 1e-6);
            }
    }
}

TEST_CASE("state count matches explicit enumeration") {
    Rng rng(233);
    for (int k = 1; k <= 2; ++k) {
        Graph g = make_random_tree(5, 3, rng);
        Graph h = make_random_tree(5, 3, rng);
        AlignmentContext ctx(g, 0, h, 0, k, 2);
        unsigned long long streamed = 0;
        ctx.enumerate_states([&](const AlignmentState&) { ++streamed; });
        CHECK(streamed == ctx.state_count());
    }
    // host path rooted at one end with k = 1: the image sets are the n-1
    // root-free edge sides
    AlignmentContext ctx(make_path(3), 0, make_path(3), 0, 1, 1);
    std::set<std::vector<int>> image_sets;
    ctx.enumerate_states([&](const AlignmentState& s) { image_sets.insert(s.image_set); });
    CHECK(image_sets == std::set<std::vector<int>>{{2}, {1, 2}});
}

TEST_CASE("image-set construction matches the component definition") {
    // a root-free set with boundary exactly D is unique in a tree and equals
    // the set of vertices separated from the root by an odd number of D-edges
    Rng rng(293);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 5 + rng.index(4);
        Graph h = make_random_tree(n, 3, rng);
        int root = rng.index(n);
        RootedTree rt(h, root);
        for (int e1 = 0; e1 < h.edge_count(); ++e1)
            for (int e2 = e1; e2 < h.edge_count(); ++e2) {
                std::set<int> want = {e1, e2};  // size 1 when e1 == e2
                std::vector<std::vector<int>> matches;
                for (int mask = 1; mask < (1 << n) - 1; ++mask) {
                    if (mask >> root & 1) continue;
                    std::vector<int> s;
                    for (int v = 0; v < n; ++v)
                        if (mask >> v & 1) s.push_back(v);
                    std::set<int> boundary;
                    for (int i = 0; i < h.edge_count(); ++i) {
                        const Edge& e = h.edges()[i];
                        bool iu = mask >> e.u & 1, iv = mask >> e.v & 1;
                        if (iu != iv) boundary.insert(i);
                    }
                    if (boundary == want) matches.push_back(std::move(s));
                }
                REQUIRE(matches.size() == 1);
                // and it is the xor of the root-free edge sides
                std::set<int> expect;
                for (int e : want)
                    for (int v : rt.subtree_under_edge(h.edges()[e])) {
                        if (expect.count(v))
                            expect.erase(v);
                        else
                            expect.insert(v);
                    }
                CHECK(std::vector<int>(expect.begin(), expect.end()) == matches[0]);
            }
    }
}

TEST_CASE("identical trees make every diagonal state positive") {
    Rng rng(297);
    Graph t = make_random_tree(7, 3, rng);
    int root = tree_centroid(t);
    AlignmentContext ctx(t, root, t, root, 1, 1);
    StateTable table = compute_state_table(ctx);
    RootedTree rt(t, root);
    int checked = 0;
    for (int u = 0; u < 7; ++u) {
        if (u == root) continue;
        AlignmentState s;
        s.g_vertex = u;
        s.image_set = rt.subtree_vertices(u);
        s.image_vertex = u;
        std::vector<int> dedges;
        for (int i = 0; i < t.edge_count(); ++i) {
            const Edge& e = t.edges()[i];
            bool iu = std::binary_search(s.image_set.begin(), s.image_set.end(), e.u);
            bool iv = std::binary_search(s.image_set.begin(), s.image_set.end(), e.v);
            if (iu != iv) dedges.push_back(i);
        }
        if (dedges.size() != 1) continue;  // k = 1 states only
        const Edge& be = t.edges()[dedges[0]];
        bool u_in = std::binary_search(s.image_set.begin(), s.image_set.end(), be.u);
        s.boundary_preimages = {u_in ? be.u : be.v};
        s.cut_preimages = {rt.subtree_under_edge(be)};
        CHECK(ctx.state_is_valid(s));
        CHECK(table.query(s));
        CHECK(ctx.certifies(s, VertexMapping::identity(7)));
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("tiny instances") {
    CHECK(align_trees(make_path(1), make_path(1), 1, 1).has_value());
    auto p2 = align_trees(make_path(2), make_path(2), 1, 1);
    REQUIRE(p2.has_value());
    CHECK(mapping_respects_bounds(make_path(2), make_path(2), *p2, 1, 1));
    auto p3 = align_trees(make_path(3), make_path(3), 1, 1);
    REQUIRE(p3.has_value());
    CHECK(align_trees(make_path(3), make_path(3), 2, 2).has_value());
}

TEST_CASE("checker accepts the identity diagonal and rejects perturbations") {
    Graph t = make_path(4);
    AlignmentContext ctx(t, 0, t, 0, 1, 1);
    VertexMapping id = VertexMapping::identity(4);
    // subtree under vertex 2 maps to itself; boundary edge (1,2), preimages match
    AlignmentState s;
    s.g_vertex = 2;
    s.image_set = {2, 3};
    s.image_vertex = 2;
    s.boundary_preimages = {2};
    s.cut_preimages = {{2, 3}};
    CHECK(ctx.state_is_valid(s));
    CHECK(ctx.certifies(s, id));

    VertexMapping swapped = VertexMapping::from_vector({0, 1, 3, 2});
    CHECK(!ctx.certifies(s, swapped));  // image of u moves off v

    AlignmentState bad = s;
    bad.boundary_preimages = {3};
    CHECK(!ctx.certifies(bad, id));

    AlignmentState loose = s;
    loose.cut_preimages = {{3}};  // wrong size for the subtree under (1,2)
    CHECK(!ctx.certifies(loose, id));

    AlignmentState outside = s;
    outside.cut_preimages = {{1, 2}};  // boundary 2 > k, not a tuple at all
    CHECK(!ctx.state_is_valid(outside));
    CHECK_THROWS_AS(ctx.certifies(outside, id), std::invalid_argument);
}

TEST_CASE("table positives agree with brute certificate existence") {
    Rng rng(239);
    for (int trial = 0; trial < 4; ++trial) {
        int n = 5;
        Graph g = make_random_tree(n, 3, rng);
        Graph h = apply_permutation(make_random_tree(n, 3, rng), make_random_permutation(n, rng));
        for (int k = 1; k <= 2; ++k) {
            AlignmentContext ctx(g, 0, h, 0, k, 2);
            StateTable table = compute_state_table(ctx);
            int checked = 0;
            ctx.enumerate_states([&](const AlignmentState& s) {
                if (++checked % 7 != 0) return;  // deterministic subsample
                bool brute_exists = !all_certificates(ctx, s).empty();
                CHECK(table.query(s) == brute_exists);
            });
        }
    }
}

TEST_CASE("stored certificates verify and stay sound") {
    Rng rng(241);
    Graph g = make_random_tree(7, 3, rng);
    Graph h = apply_permutation(make_random_tree(7, 3, rng), make_random_permutation(7, rng));
    AlignmentContext ctx(g, tree_centroid(g), h, 0, 2, 2);
    StateTable table = compute_state_table(ctx);
    int seen = 0;
    table.for_each_positive([&](const AlignmentState& s, const VertexMapping& cert) {
        ++seen;
        CHECK(ctx.state_is_valid(s));
        CHECK(ctx.certifies(s, cert));
    });
    CHECK(seen == table.positive_count());
    CHECK(seen > 0);
}

TEST_CASE("certificates of one state pin the boundary data") {
    Rng rng(251);
    for (int trial = 0; trial < 3; ++trial) {
        int n = 5;
        Graph g = make_random_tree(n, 3, rng);
        Graph h = apply_permutation(make_random_tree(n, 3, rng), make_random_permutation(n, rng));
        AlignmentContext ctx(g, 0, h, 0, 2, 2);
        StateTable table = compute_state_table(ctx);
        int inspected = 0;
        table.for_each_positive([&](const AlignmentState& s, const VertexMapping&) {
            if (inspected > 4) return;
            auto certs = all_certificates(ctx, s);
            REQUIRE(!certs.empty());
            ++inspected;
            RootedTree gt(g, 0);
            auto subtree = gt.subtree_vertices(s.g_vertex);
            for (std::size_t i = 1; i < certs.size(); ++i) {
                CHECK(certs[i][s.g_vertex] == certs[0][s.g_vertex]);
                CHECK(image_of_set(certs[i], subtree) == image_of_set(certs[0], subtree));
                for (std::size_t j = 0; j < s.boundary_preimages.size(); ++j) {
                    CHECK(certs[i][s.boundary_preimages[j]] == certs[0][s.boundary_preimages[j]]);
                    CHECK(image_of_set(certs[i], s.cut_preimages[j]) ==
                          image_of_set(certs[0], s.cut_preimages[j]));
                }
            }
        });
    }
}

TEST_CASE("rewriting a certificate off the subtree preserves certification") {
    Rng rng(257);
    Graph g = make_random_tree(7, 3, rng);
    Graph h = apply_permutation(make_random_tree(7, 3, rng), make_random_permutation(7, rng));
    AlignmentContext ctx(g, tree_centroid(g), h, 0, 2, 2);
    StateTable table = compute_state_table(ctx);
    RootedTree gt(g, tree_centroid(g));
    int mutated = 0;
    table.for_each_positive([&](const AlignmentState& s, const VertexMapping& cert) {
        if (mutated > 20) return;
        auto subtree = gt.subtree_vertices(s.g_vertex);
        std::set<int> inside(subtree.begin(), subtree.end());
        auto signature = [&](int v) {
            std::vector<bool> sig;
            for (const auto& cut : s.cut_preimages)
                sig.push_back(std::find(cut.begin(), cut.end(), v) != cut.end());
            return sig;
        };
        for (int a = 0; a < 7; ++a) {
            if (inside.count(a) || a == ctx.demand_root()) continue;
            for (int b = a + 1; b < 7; ++b) {
                if (inside.count(b) || b == ctx.demand_root()) continue;
                if (signature(a) != signature(b)) continue;
                std::vector<int> img = cert.forward();
                std::swap(img[a], img[b]);
                CHECK(ctx.certifies(s, VertexMapping::from_vector(img)));
                ++mutated;
                return;
            }
        }
    });
    CHECK(mutated > 0);
}

TEST_CASE("merge builds parent certificates from child certificates") {
    Graph p4 = make_path(4);
    AlignmentContext ctx(p4, 0, p4, 0, 1, 1);
    StateTable table = compute_state_table(ctx);
    AlignmentState child;
    child.g_vertex = 2;
    child.image_set = {2, 3};
    child.image_vertex = 2;
    child.boundary_preimages = {2};
    child.cut_preimages = {{2, 3}};
    auto child_cert = table.certificate(child);
    REQUIRE(child_cert.has_value());
    AlignmentState parent;
    parent.g_vertex = 1;
    parent.image_set = {1, 2, 3};
    parent.image_vertex = 1;
    parent.boundary_preimages = {1};
    parent.cut_preimages = {{1, 2, 3}};
    auto merged = ctx.merge(parent, {child}, {*child_cert});
    REQUIRE(merged.has_value());
    CHECK(ctx.certifies(parent, *merged));

    AlignmentState bogus = child;
    bogus.cut_preimages = {{2}};
    CHECK_THROWS_AS(ctx.merge(parent, {bogus, bogus}, {*child_cert, *child_cert}),
                    std::invalid_argument);
}

namespace {

// spine with one leg on every other spine vertex
Graph make_caterpillar(int spine, int legs_every = 2) {
    std::vector<Edge> edges;
    int next = spine;
    for (int i = 0; i + 1 < spine; ++i) edges.emplace_back(i, i + 1, 1.0);
    for (int i = 0; i < spine; i += legs_every) edges.emplace_back(i, next++, 1.0);
    return Graph(next, std::move(edges));
}

Graph make_perfect_binary(int levels) {
    std::vector<Edge> edges;
    int n = (1 << levels) - 1;
    for (int v = 1; v < n; ++v) edges.emplace_back((v - 1) / 2, v, 1.0);
    return Graph(n, std::move(edges));
}

Graph make_spider(int legs, int leg_len) {
    std::vector<Edge> edges;
    int next = 1;
    for (int l = 0; l < legs; ++l) {
        int prev = 0;
        for (int i = 0; i < leg_len; ++i) {
            edges.emplace_back(prev, next, 1.0);
            prev = next++;
        }
    }
    return Graph(next, std::move(edges));
}

}  // namespace

TEST_CASE("structured trees agree with the brute oracle") {
    Rng rng(271);
    std::vector<Graph> shapes = {
        make_caterpillar(6), make_caterpillar(7), make_perfect_binary(3),
        make_spider(3, 3),   make_path(10),       make_path(9),
    };
    for (const auto& base : shapes) {
        int n = base.vertex_count();
        if (n > 12) continue;
        for (int variant = 0; variant < 2; ++variant) {
            Graph other = variant == 0 ? base : make_random_tree(n, 3, rng);
            Graph h = apply_permutation(other, make_random_permutation(n, rng));
            for (int k = 1; k <= 2; ++k)
                for (int ell = 1; ell <= 2; ++ell) {
                    auto dp = align_trees(base, h, k, ell);
                    auto oracle = brute_mapping_feasible(base, h, k, ell);
                    CHECK(dp.has_value() == oracle.has_value());
                    if (dp) CHECK(mapping_respects_bounds(base, h, *dp, k, ell));
                }
        }
    }
}

TEST_CASE("wider bounds agree with the brute oracle at small n") {
    Rng rng(277);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 5 + rng.index(3);
        Graph g = make_random_tree(n, 3, rng);
        Graph h = apply_permutation(make_random_tree(n, 3, rng), make_random_permutation(n, rng));
        for (int k = 1; k <= 3; ++k) {
            auto dp = align_trees(g, h, k, 3);
            auto oracle = brute_mapping_feasible(g, h, k, 3);
            CHECK(dp.has_value() == oracle.has_value());
        }
    }
}

TEST_CASE("feasibility is monotone in the bounds") {
    Rng rng(281);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 10 + rng.index(4);
        Graph g = trial % 2 == 0 ? make_caterpillar(7) : make_random_tree(n, 3, rng);
        if (g.vertex_count() != n) n = g.vertex_count();
        Graph h = apply_permutation(make_random_tree(n, 3, rng), make_random_permutation(n, rng));
        bool feasible[4][4];
        for (int k = 1; k <= 3; ++k)
            for (int ell = 1; ell <= 3; ++ell) feasible[k][ell] = align_trees(g, h, k, ell).has_value();
        for (int k = 1; k <= 3; ++k)
            for (int ell = 1; ell <= 3; ++ell) {
                if (k > 1) CHECK(!(feasible[k - 1][ell] && !feasible[k][ell]));
                if (ell > 1) CHECK(!(feasible[k][ell - 1] && !feasible[k][ell]));
            }
        // any tree pair aligns once both bounds are generous enough
        CHECK(align_trees(g, h, n, n).has_value());
    }
}

TEST_CASE("parallel root search matches sequential") {
    Rng rng(269);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 6 + rng.index(3);
        Graph g = make_random_tree(n, 3, rng);
        Graph h = apply_permutation(make_random_tree(n, 3, rng), make_random_permutation(n, rng));
        auto seq = align_trees(g, h, 2, 2, 1);
        auto par = align_trees(g, h, 2, 2, 2);
        CHECK(seq.has_value() == par.has_value());
        if (seq && par) CHECK(seq->forward() == par->forward());
    }
}

TEST_CASE("srgi certification") {
    Rng rng(263);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 5 + rng.index(3);
        Graph g = make_random_tree(n, 3, rng);
        Graph h = apply_permutation(g, make_random_permutation(n, rng));
        auto r = srgi_certify(g, h, 2.0);
        REQUIRE(r.has_value());
        CHECK(r->k == 1);
        CHECK(r->ell == 1);
        CHECK(r->kappa == doctest::Approx(1.0).epsilon(1e-6));
    }
    for (int trial = 0; trial < 6; ++trial) {
        int n = 6 + rng.index(3);
        Graph g = make_random_tree(n, 3, rng);
        Graph h = apply_permutation(make_random_tree(n, 3, rng), make_random_permutation(n, rng));
        auto r = srgi_certify(g, h, 3.0);
        if (!r) continue;
        double bound = static_cast<double>(r->k) * r->ell;
        CHECK(r->kappa <= bound * bound + 1e-6);
        auto profile = stretch_cut_profile(g, aligned_host(h, r->mapping));
        CHECK(r->kappa >= std::max(profile.k, profile.ell) - 1e-6);
    }
}
