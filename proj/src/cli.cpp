#include "ggmdir/cli.hpp"

#include "ggmdir/dirtest.hpp"
#include "ggmdir/errors.hpp"
#include "ggmdir/io.hpp"
#include "ggmdir/simulate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <sstream>

namespace ggmdir {

namespace {

struct RunConfig {
    std::string data;
    std::string null_graph;
    std::string alt_graph;
    std::string graph;
    std::string scenario;
    std::string out;
    std::string format;
    std::optional<double> quad_tol;
    std::optional<std::uint64_t> seed;
    int workers = 1;
};

std::string fixed3(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string sig3(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string vertex_set(const std::vector<int>& vs) {
    std::string s = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + std::to_string(vs[i] + 1);
    return s + "}";
}

std::string report_csv(const TestReport& r) {
    std::ostringstream os;
    os << "n,q,d,w,log_gamma,w_star,w_star2,p_lr,p_star,p_star2,p_dir,t_max,degenerate\n"
       << r.n << ',' << r.q << ',' << r.d << ',' << format_double(r.w) << ',' << format_double(r.log_gamma) << ','
       << format_double(r.w_star) << ',' << format_double(r.w_star2) << ',' << format_double(r.p_lr) << ','
       << format_double(r.p_star) << ',' << format_double(r.p_star2) << ',' << format_double(r.p_dir) << ','
       << format_double(r.t_max) << ',' << (r.degenerate ? 1 : 0) << '\n';
    return os.str();
}

int cmd_test(const RunConfig& cfg, std::ostream& out) {
    const auto stats = suff_stats(read_data_csv(cfg.data));
    const auto pair = nest(parse_graph_spec(cfg.null_graph), parse_graph_spec(cfg.alt_graph));
    QuadratureConfig quad;
    if (cfg.quad_tol) quad.rel_tol = *cfg.quad_tol;
    const auto r = test_nested(stats, pair, quad);

    if (!cfg.out.empty()) write_text_file(cfg.out, cfg.format == "csv" ? report_csv(r) : report_to_json(r));
    out << "n=" << r.n << " q=" << r.q << " d=" << r.d << "  w=" << fixed3(r.w) << " (p=" << sig3(r.p_lr)
        << ")  w*=" << fixed3(r.w_star) << " (p=" << sig3(r.p_star) << ")  w**=" << fixed3(r.w_star2)
        << " (p=" << sig3(r.p_star2) << ")  p_dir=" << sig3(r.p_dir);
    if (r.degenerate) out << "  [degenerate: fits coincide]";
    if (r.one_sided) out << "  [d=1: one-sided]";
    out << '\n';
    return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto scenario = read_scenario(cfg.scenario);
    if (cfg.seed) scenario.base_seed = *cfg.seed;
    if (cfg.quad_tol) scenario.quad.rel_tol = *cfg.quad_tol;
    const auto report = run_scenario(scenario, cfg.workers, !cfg.out.empty());

    if (!cfg.out.empty()) {
        write_text_file(cfg.out + ".csv", sim_report_csv(report));
        write_text_file(cfg.out + ".json", sim_report_json(report));
        if (report.replications > 0)
            write_text_file(cfg.out + "_relerr.csv", relative_error_csv(relative_error_table(report)));
    } else {
        out << (cfg.format == "json" ? sim_report_json(report) : sim_report_csv(report));
    }
    if (report.failures > 0)
        err << "warning: " << report.failures << " of " << report.replications
            << " replications failed; first: " << report.first_failure << '\n';
    return 0;
}

int cmd_graph(const RunConfig& cfg, std::ostream& out) {
    const Graph g = parse_graph_spec(cfg.graph);
    const auto verdict = chordality(g);
    out << "q = " << g.order() << "\np = " << g.p() << " (free concentration entries)\n";
    std::size_t largest = 0;
    if (verdict.chordal()) {
        const auto dec = clique_decomposition(g);
        largest = dec.max_clique_size();
        out << "chordal: yes\ncliques (" << dec.cliques.size() << "):";
        for (const auto& c : dec.cliques) out << ' ' << vertex_set(c);
        out << "\nseparators (" << dec.separators.size() << "):";
        for (const auto& s : dec.separators) out << ' ' << vertex_set(s);
        out << '\n';
    } else {
        largest = max_clique_size(g);
        out << "chordal: no (certificate vertex " << *verdict.fill_in_vertex + 1
            << ": its earlier neighbours in maximum cardinality search are not a clique)\n";
    }
    out << "max clique size: " << largest << "\nminimum n for MLE existence: " << largest + 1;
    if (!verdict.chordal()) out << " (necessary only)";
    out << '\n';
    if (!cfg.out.empty()) write_text_file(cfg.out, graph_to_json(g) + "\n");
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Directional and higher-order likelihood tests for nested Gaussian graphical models", "ggmdir"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* test = app.add_subcommand("test", "test a null graph against an alternative on a data set");
    test->add_option("--data", cfg.data, "CSV with one row per observation")->required()->check(CLI::ExistingFile);
    test->add_option("--null", cfg.null_graph, "null graph: JSON file or md:q:m, block:s1,s2, saturated:q")
        ->required();
    test->add_option("--alt", cfg.alt_graph, "alternative graph, same grammar")->required();
    test->add_option("--out", cfg.out, "write the full report here");
    test->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    test->add_option("--quad-tol", cfg.quad_tol, "relative tolerance of the directional p-value")
        ->check(CLI::PositiveNumber);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo calibration under the null model");
    sim->add_option("--scenario", cfg.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", cfg.out, "prefix for <out>.csv, <out>.json and <out>_relerr.csv");
    sim->add_option("--format", cfg.format, "stdout format without --out")->check(CLI::IsMember({"json", "csv"}));
    sim->add_option("--seed", cfg.seed, "override the scenario seed");
    sim->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    sim->add_option("--quad-tol", cfg.quad_tol, "relative tolerance of the directional p-value")
        ->check(CLI::PositiveNumber);

    auto* graph = app.add_subcommand("graph", "describe a graph");
    graph->add_option("graph", cfg.graph, "JSON file or shorthand")->required();
    graph->add_option("--out", cfg.out, "write the graph as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (test->parsed()) return cmd_test(cfg, out);
        if (sim->parsed()) return cmd_simulate(cfg, out, err);
        return cmd_graph(cfg, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace ggmdir
