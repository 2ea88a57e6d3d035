#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ustatlab/graphon.hpp"
#include "ustatlab/hoeffding.hpp"
#include "ustatlab/kernel.hpp"
#include "ustatlab/mc.hpp"
#include "ustatlab/motif.hpp"
#include "ustatlab/normal.hpp"
#include "ustatlab/stein.hpp"
#include "ustatlab/ustat.hpp"

namespace {

using namespace ustatlab;

struct CommonArgs {
    std::string kernel_path;
    std::string motif_path;
    std::string graphon_path;
    std::string graph_path;
    std::string mode = "inj";
    std::string p_text;
    std::string n_grid_text;
    std::string standardization = "exact";
    std::string out_path;
    int n = 0;
    std::uint64_t seed = 0;
    int replicates = 0;
    int threads = 0;

    int resolved_threads() const { return threads > 0 ? threads : default_thread_count(); }
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--kernel", args.kernel_path, "kernel spec file (JSON)");
    cmd->add_option("--motif,--file", args.motif_path, "motif file");
    cmd->add_option("--graphon", args.graphon_path, "graphon spec file (JSON)");
    cmd->add_option("--graph", args.graph_path, "graph sample file (edge list)");
    cmd->add_option("--mode", args.mode, "subgraph count mode: inj|ind");
    cmd->add_option("--p", args.p_text, "edge probability (decimal or a/b)");
    cmd->add_option("--n", args.n, "number of vertices");
    cmd->add_option("--n-grid", args.n_grid_text, "comma-separated n grid, e.g. 16,32,64");
    cmd->add_option("--replicates", args.replicates, "Monte Carlo replicates per grid point");
    cmd->add_option("--seed", args.seed, "RNG seed (default 0)");
    cmd->add_option("--threads", args.threads, "worker threads (default: USTATLAB_THREADS or all cores)");
    cmd->add_option("--standardization", args.standardization, "exact|plugin");
    cmd->add_option("--out", args.out_path, "output file (default: stdout)");
}

void emit(const CommonArgs& args, const std::string& content) {
    if (args.out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw ArgumentError("cannot open output file: " + args.out_path);
    out << content;
    std::cout << "wrote " << args.out_path << "\n";
}

StepGraphon resolve_graphon(const CommonArgs& args) {
    if (!args.graphon_path.empty()) return load_graphon(args.graphon_path);
    if (!args.p_text.empty()) return StepGraphon::constant(parse_rational(args.p_text).value());
    throw ParseError("need --graphon or --p");
}

Kernel resolve_kernel(const CommonArgs& args) {
    if (!args.kernel_path.empty()) return load_kernel(args.kernel_path);
    if (!args.motif_path.empty()) {
        return make_subgraph_kernel(load_motif(args.motif_path), resolve_graphon(args),
                                    parse_count_mode(args.mode));
    }
    throw ParseError("need --kernel, or --motif with --p/--graphon");
}

std::vector<int> parse_n_grid(const std::string& text) {
    std::vector<int> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            grid.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ParseError("bad n-grid entry: " + item);
        }
    }
    if (grid.empty()) throw ParseError("empty n grid");
    return grid;
}

int cmd_motif(const CommonArgs& args) {
    if (args.motif_path.empty()) throw ParseError("motif command needs --motif/--file");
    Motif f = load_motif(args.motif_path);
    MotifStats st = motif_stats(f);
    std::ostringstream os;
    os << "e=" << st.edge_count << " s=" << st.two_star_count << " t=" << st.triangle_count
       << " |Aut|=" << automorphism_count(f) << " connected=" << (is_connected(f) ? "true" : "false")
       << " strongly_connected=" << (is_strongly_connected(f) ? "true" : "false");
    if (!args.p_text.empty()) {
        InducedCase c = classify_induced(f, parse_rational(args.p_text));
        os << " case=" << to_string(c);
        switch (c) {
            case InducedCase::G1:
            case InducedCase::G3: os << " predicted_rate=-1"; break;
            case InducedCase::G2: os << " predicted_rate=-0.5"; break;
            default: os << " predicted_rate=nonnormal"; break;
        }
    }
    os << "\n";
    emit(args, os.str());
    return 0;
}

int cmd_decompose(const CommonArgs& args) {
    Kernel f = resolve_kernel(args);
    Decomposition dec = hoeffding_decompose(f);
    KernelSummary summary = summarize(dec);
    emit(args, format_decomposition(dec, &summary));
    return 0;
}

int cmd_sample(const CommonArgs& args) {
    if (args.n < 1) throw ParseError("sample needs --n >= 1");
    GraphSample g = sample(resolve_graphon(args), args.n, args.seed);
    emit(args, format_graph_sample(g));
    return 0;
}

int cmd_count(const CommonArgs& args) {
    if (args.motif_path.empty()) throw ParseError("count needs --motif");
    Motif f = load_motif(args.motif_path);
    CountMode mode = parse_count_mode(args.mode);
    std::ostringstream os;
    os.precision(17);
    if (!args.graph_path.empty()) {
        std::ifstream in(args.graph_path);
        if (!in) throw ParseError("cannot open graph file: " + args.graph_path);
        GraphSample g = parse_graph_sample(in);
        os << "count " << count_subgraphs(g, f, mode) << "\n";
    } else {
        if (args.n < 1) throw ParseError("count needs --graph, or --n with --p/--graphon");
        StepGraphon g = resolve_graphon(args);
        GraphSample sampled = sample(g, args.n, args.seed);
        os << "count " << count_subgraphs(sampled, f, mode) << "\n";
        os << "expected " << expected_count(f, g, args.n, mode) << "\n";
    }
    emit(args, os.str());
    return 0;
}

int cmd_variance(const CommonArgs& args) {
    if (args.n < 1) throw ParseError("variance needs --n");
    Kernel f = resolve_kernel(args);
    Decomposition dec = hoeffding_decompose(f);
    VarianceReport report = variance_closed_form(dec, args.n);
    std::ostringstream os;
    os << format_variance_report(report);
    os.precision(17);
    os << "mean " << exact_mean(dec, args.n) << "\n";
    try {
        double oracle = variance_oracle(f, args.n);
        os << "oracle " << oracle << "\n";
        os << "relative_gap "
           << std::abs(oracle - report.sigma_n_sq) / std::max(1e-300, std::abs(oracle)) << "\n";
    } catch (const CapabilityError&) {
        os << "oracle skipped (state space too large)\n";
    }
    emit(args, os.str());
    return 0;
}

int cmd_stein_check(const CommonArgs& args) {
    if (args.n < 1) throw ParseError("stein-check needs --n");
    Kernel f = resolve_kernel(args);
    Decomposition dec = hoeffding_decompose(f);
    KernelSummary summary = summarize(dec);
    SteinPairReport report = summary.sigma1 > summary.zero_tol
                                 ? check_linearity_x_swap(dec, args.n)
                                 : check_linearity_edge_swap(dec, args.n);
    emit(args, format_stein_report(report));
    return 0;
}

int cmd_bound(const CommonArgs& args) {
    if (args.n < 1) throw ParseError("bound needs --n");
    Kernel f = resolve_kernel(args);
    Decomposition dec = hoeffding_decompose(f);
    KernelSummary summary = summarize(dec);
    std::ostringstream os;
    os.precision(17);
    os << be_bound_theorem21(summary, f.k, args.n) << "\n";
    emit(args, os.str());
    return 0;
}

int cmd_verify_rate(const CommonArgs& args) {
    if (args.n_grid_text.empty()) throw ParseError("verify-rate needs --n-grid");
    if (args.replicates < 1) throw ParseError("verify-rate needs --replicates");
    ExperimentSpec spec;
    if (!args.kernel_path.empty()) {
        spec.kernel = load_kernel(args.kernel_path);
    } else if (!args.motif_path.empty()) {
        spec.motif = load_motif(args.motif_path);
        spec.mode = parse_count_mode(args.mode);
        spec.graphon = resolve_graphon(args);
    } else {
        throw ParseError("verify-rate needs --kernel or --motif");
    }
    spec.n_grid = parse_n_grid(args.n_grid_text);
    spec.replicates = args.replicates;
    spec.seed = args.seed;
    spec.standardization = parse_standardization(args.standardization);
    spec.threads = args.resolved_threads();

    RateReport report = run_experiment(spec);
    std::string csv = format_rate_csv(report);
    std::string json = format_rate_summary_json(report);
    if (args.out_path.empty()) {
        std::cout << csv << json;
    } else {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out) throw ArgumentError("cannot open output file: " + args.out_path);
        out << csv;
        std::string json_path = args.out_path + ".json";
        auto dot = args.out_path.rfind('.');
        if (dot != std::string::npos && args.out_path.substr(dot) == ".csv") {
            json_path = args.out_path.substr(0, dot) + ".json";
        }
        std::ofstream jout(json_path, std::ios::binary);
        if (!jout) throw ArgumentError("cannot open output file: " + json_path);
        jout << json;
        std::cout << "wrote " << args.out_path << " and " << json_path << "\n";
    }
    std::cout << "verdict " << report.verdict << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized U-statistics over graph kernels: exact decomposition, "
                 "variance formulas, graphon sampling, and rate experiments"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* motif_cmd = app.add_subcommand("motif", "motif statistics, automorphisms, connectivity, case split");
    auto* decompose_cmd = app.add_subcommand("decompose", "orthogonal projection table and kernel summary");
    auto* sample_cmd = app.add_subcommand("sample", "draw a graph from a step graphon");
    auto* count_cmd = app.add_subcommand("count", "subgraph count of a motif in a graph");
    auto* variance_cmd = app.add_subcommand("variance", "closed-form variance with oracle cross-check");
    auto* stein_cmd = app.add_subcommand("stein-check", "exchangeable-pair linearity diagnostics");
    auto* bound_cmd = app.add_subcommand("bound", "explicit first-order normal-approximation bound");
    auto* verify_cmd = app.add_subcommand("verify-rate", "Monte Carlo Kolmogorov-rate experiment");
    for (auto* cmd : {motif_cmd, decompose_cmd, sample_cmd, count_cmd, variance_cmd, stein_cmd,
                      bound_cmd, verify_cmd}) {
        add_common_flags(cmd, args);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (motif_cmd->parsed()) return cmd_motif(args);
        if (decompose_cmd->parsed()) return cmd_decompose(args);
        if (sample_cmd->parsed()) return cmd_sample(args);
        if (count_cmd->parsed()) return cmd_count(args);
        if (variance_cmd->parsed()) return cmd_variance(args);
        if (stein_cmd->parsed()) return cmd_stein_check(args);
        if (bound_cmd->parsed()) return cmd_bound(args);
        if (verify_cmd->parsed()) return cmd_verify_rate(args);
    } catch (const ustatlab::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 2;
    } catch (const ustatlab::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
