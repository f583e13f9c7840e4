// sgsim: spectral graph similarity toolkit.
//
// One subcommand per library operation; every invocation reads JSON graphs,
// writes a single JSON document to stdout, and echoes its resolved
// parameters so runs are reproducible byte for byte.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "sgsim/brute.hpp"
#include "sgsim/embedding.hpp"
#include "sgsim/generate.hpp"
#include "sgsim/graph.hpp"
#include "sgsim/hamiltonian.hpp"
#include "sgsim/hardness.hpp"
#include "sgsim/io.hpp"
#include "sgsim/rational.hpp"
#include "sgsim/spectral.hpp"
#include "sgsim/tree_align.hpp"

namespace {

using namespace sgsim;

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;  // the answer is "no"/"none", as opposed to an error
constexpr int kExitError = 2;

struct Output {
    Json doc;
    int exit_code = kExitOk;
};

void emit(const Json& doc, bool pretty) {
    std::cout << (pretty ? doc.dump(2) : doc.dump()) << "\n";
}

Json mapping_to_json(const VertexMapping& pi) {
    Json j = Json::array();
    for (int v : pi.forward()) j.push_back(v);
    return j;
}

Json sigma_to_json(double sigma) {
    if (std::isinf(sigma)) return "inf";
    return sigma;
}

Json witness_vector_to_json(const Vector& x) {
    Json j = Json::array();
    for (int i = 0; i < x.size(); ++i) j.push_back(x[i]);
    return j;
}

struct Cli {
    CLI::App app{"spectral graph similarity toolkit"};
    bool pretty = false;

    // gen
    std::string gen_kind;
    int gen_n = 5;
    int gen_max_degree = 3;
    std::uint64_t seed = 0;
    std::string gen_points;

    // graph inputs
    std::string g_path, h_path;
    double tol = kDefaultTol;

    // resistance
    int res_u = 0, res_v = 0;

    // brute
    int limit_sgd = 9;
    int limit_feasible = 12;
    bool no_prune = false;
    int jobs = 1;

    // alignment
    int k = 1, ell = 1;
    double kappa_budget = 1.0;

    // hardness
    std::string grid_path, instance_path, perm_json, witness_path;

    // sweep
    std::string suite;
    int trials = 50;
    int degree = 4;
    int sweep_n = 10;
};

Output run_gen(Cli& cli) {
    Rng rng(cli.seed);
    Json params{{"kind", cli.gen_kind}, {"seed", cli.seed}};
    Graph g;
    std::optional<std::vector<std::pair<int, int>>> coords;
    if (cli.gen_kind == "path") {
        g = make_path(cli.gen_n);
        params["n"] = cli.gen_n;
    } else if (cli.gen_kind == "cycle") {
        g = make_cycle(cli.gen_n);
        params["n"] = cli.gen_n;
    } else if (cli.gen_kind == "star") {
        g = make_star(cli.gen_n);
        params["n"] = cli.gen_n;
    } else if (cli.gen_kind == "random_tree") {
        g = make_random_tree(cli.gen_n, cli.gen_max_degree, rng);
        params["n"] = cli.gen_n;
        params["max_degree"] = cli.gen_max_degree;
    } else if (cli.gen_kind == "subgrid") {
        if (cli.gen_points.empty()) throw std::invalid_argument("subgrid: --points required");
        std::vector<std::pair<int, int>> pts;
        for (const auto& p : Json::parse(cli.gen_points))
            pts.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        auto sub = make_subgrid(pts);
        g = sub.graph;
        coords = sub.points;
        params["points"] = Json::parse(cli.gen_points);
    } else {
        throw std::invalid_argument("unknown kind: " + cli.gen_kind);
    }
    Json doc = graph_to_json(g, std::nullopt, coords);
    doc["params"] = params;
    return {doc, kExitOk};
}

Output run_support(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    auto r = support(g, h, cli.tol);
    Json doc{{"sigma", sigma_to_json(r.sigma)},
             {"witness", witness_vector_to_json(r.witness_direction)},
             {"params", Json{{"n", g.vertex_count()}, {"tol", cli.tol}}}};
    return {doc, kExitOk};
}

Output run_condition(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    auto r = condition(g, h, cli.tol);
    Json doc{{"kappa", sigma_to_json(r.kappa)},
             {"sigma_gh", sigma_to_json(r.sigma_gh)},
             {"sigma_hg", sigma_to_json(r.sigma_hg)},
             {"params", Json{{"n", g.vertex_count()}, {"tol", cli.tol}}}};
    return {doc, kExitOk};
}

Output run_precedes(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    bool yes = precedes(g, h, cli.tol);
    Json doc{{"precedes", yes}, {"params", Json{{"n", g.vertex_count()}, {"tol", cli.tol}}}};
    return {doc, yes ? kExitOk : kExitNo};
}

Output run_resistance(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    double r = effective_resistance(g, cli.res_u, cli.res_v);
    Json doc{{"resistance", r},
             {"params", Json{{"n", g.vertex_count()}, {"u", cli.res_u}, {"v", cli.res_v}}}};
    return {doc, kExitOk};
}

Output run_embed_stats(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    auto emb = embed(g, h);
    auto profile = stretch_cut_profile(g, h);
    int c = congestion(emb), d = dilation(emb);
    Json doc{{"dilation", d},
             {"congestion", c},
             {"k", profile.k},
             {"ell", profile.ell},
             {"sigma_upper", static_cast<double>(c) * d},
             {"params", Json{{"n", g.vertex_count()}}}};
    return {doc, kExitOk};
}

Output run_brute_sgd(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    BruteOptions opts;
    opts.limit = cli.limit_sgd;
    opts.prune = !cli.no_prune;
    opts.jobs = cli.jobs;
    opts.tol = cli.tol;
    auto r = brute_sgd(g, h, opts);
    Json params{{"n", g.vertex_count()}, {"tol", cli.tol}, {"prune", opts.prune}, {"jobs", cli.jobs}};
    if (!r) return {Json{{"found", false}, {"params", params}}, kExitNo};
    double sigma = support(apply_permutation(h, *r), g, cli.tol).sigma;
    Json doc{{"found", true},
             {"mapping", mapping_to_json(*r)},
             {"sigma", sigma_to_json(sigma)},
             {"params", params}};
    return {doc, kExitOk};
}

Output run_brute_srgi(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    BruteOptions opts;
    opts.limit = cli.limit_sgd;
    opts.prune = !cli.no_prune;
    opts.jobs = cli.jobs;
    opts.tol = cli.tol;
    auto r = brute_srgi(g, h, opts);
    Json doc{
        {"mapping", mapping_to_json(r.mapping)},
        {"kappa_min", sigma_to_json(r.kappa_min)},
        {"params",
         Json{{"n", g.vertex_count()}, {"tol", cli.tol}, {"prune", opts.prune}, {"jobs", cli.jobs}}}};
    return {doc, kExitOk};
}

Output run_brute_feasible(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    FeasibleOptions opts;
    opts.limit = cli.limit_feasible;
    opts.prune = !cli.no_prune;
    opts.jobs = cli.jobs;
    auto r = brute_mapping_feasible(g, h, cli.k, cli.ell, opts);
    Json params{{"n", g.vertex_count()},
                {"k", cli.k},
                {"ell", cli.ell},
                {"prune", opts.prune},
                {"jobs", cli.jobs}};
    if (!r) return {Json{{"found", false}, {"params", params}}, kExitNo};
    return {Json{{"found", true}, {"mapping", mapping_to_json(*r)}, {"params", params}}, kExitOk};
}

Output run_align_trees(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    auto r = align_trees(g, h, cli.k, cli.ell, cli.jobs);
    Json params{{"n", g.vertex_count()}, {"k", cli.k}, {"ell", cli.ell}, {"jobs", cli.jobs}};
    if (!r) return {Json{{"found", false}, {"params", params}}, kExitNo};
    double kappa = condition(g, aligned_host(h, *r), cli.tol).kappa;
    Json doc{{"found", true},
             {"mapping", mapping_to_json(*r)},
             {"k", cli.k},
             {"ell", cli.ell},
             {"kappa_spectral", sigma_to_json(kappa)},
             {"params", params}};
    return {doc, kExitOk};
}

Output run_srgi_certify(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    auto r = srgi_certify(g, h, cli.kappa_budget, cli.tol, cli.jobs);
    Json params{{"n", g.vertex_count()}, {"kappa_budget", cli.kappa_budget}, {"tol", cli.tol}};
    if (!r) return {Json{{"found", false}, {"params", params}}, kExitNo};
    Json doc{{"found", true},
             {"mapping", mapping_to_json(r->mapping)},
             {"k", r->k},
             {"ell", r->ell},
             {"kappa_spectral", sigma_to_json(r->kappa)},
             {"params", params}};
    return {doc, kExitOk};
}

Output run_reduce_ham(Cli& cli) {
    auto doc_in = read_graph_file(cli.grid_path);
    if (!doc_in.coords) throw std::invalid_argument("reduce-ham: input needs \"coords\"");
    auto grid = make_subgrid(*doc_in.coords);
    if (!(grid.graph == doc_in.graph))
        throw std::invalid_argument("reduce-ham: edges do not match the unit-distance pairs");
    auto inst = reduce_hamiltonian(grid);
    Json doc{{"g", graph_to_json(inst.grid.graph, std::nullopt, inst.grid.points)},
             {"h", graph_to_json(inst.cycle)},
             {"params", Json{{"n", inst.grid.graph.vertex_count()}}}};
    return {doc, kExitOk};
}

Output run_resolve(Cli& cli) {
    Json inst = read_json_file(cli.instance_path);
    auto gdoc = graph_from_json(inst.at("g"));
    if (!gdoc.coords) throw std::invalid_argument("resolve: instance needs grid coords");
    auto grid = make_subgrid(*gdoc.coords);
    Graph h = graph_from_json(inst.at("h")).graph;
    if (!cli.perm_json.empty()) {
        std::vector<int> order;
        for (const auto& v : Json::parse(cli.perm_json)) order.push_back(v.get<int>());
        h = make_cycle_through(order);
    }
    auto r = resolve(grid, h);
    Json params{{"n", grid.graph.vertex_count()}};
    if (!cli.perm_json.empty()) params["perm"] = Json::parse(cli.perm_json);
    if (r.witness) {
        Json doc{{"kind", "witness"},
                 {"witness", witness_to_json(*r.witness)},
                 {"case", r.witness->case_tag},
                 {"params", params}};
        return {doc, kExitOk};
    }
    Json cyc = Json::array();
    for (int v : *r.hamiltonian_cycle) cyc.push_back(v);
    Json doc{{"kind", "cycle"},
             {"cycle", cyc},
             {"rewiring_rounds", r.rewiring_rounds},
             {"params", params}};
    return {doc, kExitOk};
}

Output run_witness_verify(Cli& cli) {
    Graph g = read_graph_file(cli.g_path).graph;
    Graph h = read_graph_file(cli.h_path).graph;
    Witness w = witness_from_json(read_json_file(cli.witness_path));
    bool ok = verify_witness(g, h, w);
    Json doc{{"valid", ok},
             {"lhs", rational_to_json(quadratic_form_exact(h, w.x))},
             {"rhs", rational_to_json(quadratic_form_exact(g, w.x))},
             {"params", Json{{"n", g.vertex_count()}}}};
    return {doc, ok ? kExitOk : kExitNo};
}

Output run_sweep(Cli& cli) {
    Rng rng(cli.seed);
    Json params{{"suite", cli.suite},
                {"n", cli.sweep_n},
                {"trials", cli.trials},
                {"seed", cli.seed},
                {"degree", cli.degree},
                {"tol", cli.tol}};
    int violations = 0;
    if (cli.suite == "cuts-edges-trees") {
        double worst_upper = 0.0, worst_lower = 0.0;
        for (int t = 0; t < cli.trials; ++t) {
            int n = 2 + rng.index(std::max(1, cli.sweep_n - 1));
            Graph g = make_random_tree(n, cli.degree, rng);
            Graph h = apply_permutation(make_random_tree(n, cli.degree, rng),
                                        make_random_permutation(n, rng));
            auto profile = stretch_cut_profile(g, h);
            double sigma = support(g, h).sigma;
            double lo = std::max(profile.k, profile.ell);
            double hi = static_cast<double>(profile.k) * profile.ell;
            if (sigma < lo - 1e-6 || sigma > hi + 1e-6) ++violations;
            worst_lower = std::max(worst_lower, lo - sigma);
            worst_upper = std::max(worst_upper, sigma - hi);
        }
        Json doc{{"violations", violations},
                 {"max_lower_slack", worst_lower},
                 {"max_upper_slack", worst_upper},
                 {"params", params}};
        return {doc, violations == 0 ? kExitOk : kExitNo};
    }
    if (cli.suite == "dila-cong") {
        double worst = 0.0;
        for (int t = 0; t < cli.trials; ++t) {
            int n = 2 + rng.index(std::max(1, cli.sweep_n - 1));
            Graph g = make_random_tree(n, cli.degree, rng);
            Graph h = apply_permutation(make_random_tree(n, cli.degree, rng),
                                        make_random_permutation(n, rng));
            double bound = support_upper_bound(embed(g, h));
            double sigma = support(g, h).sigma;
            if (sigma > bound + 1e-6) ++violations;
            worst = std::max(worst, sigma - bound);
        }
        Json doc{{"violations", violations}, {"max_excess", worst}, {"params", params}};
        return {doc, violations == 0 ? kExitOk : kExitNo};
    }
    if (cli.suite == "tree-resistance") {
        double worst = 0.0;
        for (int t = 0; t < cli.trials; ++t) {
            int n = 2 + rng.index(std::max(1, cli.sweep_n - 1));
            Graph g = make_random_tree(n, cli.degree, rng);
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) {
                    double err = std::abs(effective_resistance(g, u, v) -
                                          static_cast<double>(tree_distance(g, u, v)));
                    if (err > 1e-9) ++violations;
                    worst = std::max(worst, err);
                }
        }
        Json doc{{"violations", violations}, {"max_error", worst}, {"params", params}};
        return {doc, violations == 0 ? kExitOk : kExitNo};
    }
    throw std::invalid_argument("unknown suite: " + cli.suite);
}

}  // namespace

int main(int argc, char** argv) {
    Cli cli;
    cli.app.require_subcommand(1);

    cli.app.set_help_flag("--help", "print help");
    auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print help");
        sub->add_flag("--pretty", cli.pretty, "indent the JSON output");
        return sub;
    };
    auto add_pair = [&](CLI::App* sub) {
        sub->add_option("--g", cli.g_path, "first graph (JSON file or -)")->required();
        sub->add_option("--h", cli.h_path, "second graph (JSON file or -)")->required();
        return sub;
    };

    auto* gen = add_common(cli.app.add_subcommand("gen", "generate a graph"));
    gen->add_option("--kind", cli.gen_kind, "path|cycle|star|random_tree|subgrid")->required();
    gen->add_option("--n", cli.gen_n, "vertex count");
    gen->add_option("--max-degree", cli.gen_max_degree, "degree cap for random_tree");
    gen->add_option("--seed", cli.seed, "random seed");
    gen->add_option("--points", cli.gen_points, "JSON point list for subgrid");

    auto* sup = add_pair(add_common(cli.app.add_subcommand("support", "support number sigma(G,H)")));
    sup->add_option("--tol", cli.tol, "tolerance");
    auto* cond = add_pair(add_common(cli.app.add_subcommand("condition", "condition number kappa")));
    cond->add_option("--tol", cli.tol, "tolerance");
    auto* prec = add_pair(add_common(cli.app.add_subcommand("precedes", "PSD-order test")));
    prec->add_option("--tol", cli.tol, "tolerance");

    auto* res = add_common(cli.app.add_subcommand("resistance", "effective resistance"));
    res->add_option("--g", cli.g_path)->required();
    res->add_option("--u", cli.res_u)->required();
    res->add_option("--v", cli.res_v)->required();

    add_pair(add_common(cli.app.add_subcommand("embed-stats", "tree embedding statistics")));

    auto* bsgd = add_pair(add_common(cli.app.add_subcommand("brute-sgd", "exhaustive dominance search")));
    bsgd->add_option("--limit", cli.limit_sgd, "max n");
    bsgd->add_option("--tol", cli.tol, "tolerance");
    bsgd->add_flag("--no-prune", cli.no_prune, "disable sound filters (audit mode)");
    bsgd->add_option("--jobs", cli.jobs, "worker count");

    auto* bsrgi = add_pair(add_common(cli.app.add_subcommand("brute-srgi", "exhaustive kappa minimum")));
    bsrgi->add_option("--limit", cli.limit_sgd, "max n");
    bsrgi->add_option("--tol", cli.tol, "tolerance");
    bsrgi->add_flag("--no-prune", cli.no_prune, "disable memoization");
    bsrgi->add_option("--jobs", cli.jobs, "worker count");

    auto* bfeas =
        add_pair(add_common(cli.app.add_subcommand("brute-feasible", "exhaustive bounded-mapping search")));
    bfeas->add_option("--k", cli.k, "cut bound")->required();
    bfeas->add_option("--ell", cli.ell, "stretch bound")->required();
    bfeas->add_option("--limit", cli.limit_feasible, "max n");
    bfeas->add_flag("--no-prune", cli.no_prune, "plain enumeration (audit mode)");
    bfeas->add_option("--jobs", cli.jobs, "worker count");

    auto* at = add_pair(add_common(cli.app.add_subcommand("align-trees", "boundary-state tree alignment")));
    at->add_option("--k", cli.k, "cut bound")->required();
    at->add_option("--ell", cli.ell, "stretch bound")->required();
    at->add_option("--tol", cli.tol, "tolerance");
    at->add_option("--jobs", cli.jobs, "worker count (parallel host roots)");

    auto* cert = add_pair(add_common(cli.app.add_subcommand("srgi-certify", "kappa certification sweep")));
    cert->add_option("--kappa", cli.kappa_budget, "budget")->required();
    cert->add_option("--tol", cli.tol, "tolerance");
    cert->add_option("--jobs", cli.jobs, "worker count (parallel host roots)");

    auto* red = add_common(cli.app.add_subcommand("reduce-ham", "pair a cubic subgrid with the n-cycle"));
    red->add_option("--grid", cli.grid_path, "subgrid JSON with coords")->required();

    auto* rsv = add_common(cli.app.add_subcommand("resolve", "witness or Hamiltonian cycle"));
    rsv->add_option("--instance", cli.instance_path, "instance JSON from reduce-ham")->required();
    rsv->add_option("--perm", cli.perm_json, "cycle placement as a JSON vertex order");

    auto* wv = add_common(cli.app.add_subcommand("witness-verify", "exact witness recheck"));
    wv->add_option("--g", cli.g_path)->required();
    wv->add_option("--h", cli.h_path)->required();
    wv->add_option("--witness", cli.witness_path, "witness JSON file")->required();

    auto* sweep = add_common(cli.app.add_subcommand("sweep", "randomized property sweeps"));
    sweep->add_option("--suite", cli.suite, "cuts-edges-trees|dila-cong|tree-resistance")->required();
    sweep->add_option("--n", cli.sweep_n, "max vertex count");
    sweep->add_option("--trials", cli.trials, "trial count");
    sweep->add_option("--seed", cli.seed, "random seed");
    sweep->add_option("--degree", cli.degree, "degree cap");
    sweep->add_option("--tol", cli.tol, "tolerance");

    CLI11_PARSE(cli.app, argc, argv);

    try {
        Output out;
        if (gen->parsed()) out = run_gen(cli);
        else if (sup->parsed()) out = run_support(cli);
        else if (cond->parsed()) out = run_condition(cli);
        else if (prec->parsed()) out = run_precedes(cli);
        else if (res->parsed()) out = run_resistance(cli);
        else if (cli.app.get_subcommand("embed-stats")->parsed()) out = run_embed_stats(cli);
        else if (bsgd->parsed()) out = run_brute_sgd(cli);
        else if (bsrgi->parsed()) out = run_brute_srgi(cli);
        else if (bfeas->parsed()) out = run_brute_feasible(cli);
        else if (at->parsed()) out = run_align_trees(cli);
        else if (cert->parsed()) out = run_srgi_certify(cli);
        else if (red->parsed()) out = run_reduce_ham(cli);
        else if (rsv->parsed()) out = run_resolve(cli);
        else if (wv->parsed()) out = run_witness_verify(cli);
        else if (sweep->parsed()) out = run_sweep(cli);
        else throw std::logic_error("no subcommand matched");
        emit(out.doc, cli.pretty);
        return out.exit_code;
    } catch (const std::exception& e) {
        emit(Json{{"error", e.what()}}, cli.pretty);
        return kExitError;
    }
}
