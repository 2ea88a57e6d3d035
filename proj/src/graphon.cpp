#include "ustatlab/graphon.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ustatlab/rng.hpp"

namespace ustatlab {

StepGraphon::StepGraphon(Eigen::MatrixXd v) : values(std::move(v)) {
    if (values.rows() < 1 || values.rows() != values.cols()) {
        throw ValidationError("graphon matrix must be square and nonempty");
    }
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            double v_ij = values(i, j);
            if (v_ij < 0.0 || v_ij > 1.0) throw ValidationError("graphon value outside [0,1]");
            if (values(i, j) != values(j, i)) throw ValidationError("graphon matrix not symmetric");
        }
    }
}

StepGraphon StepGraphon::constant(double p) {
    Eigen::MatrixXd v(1, 1);
    v << p;
    return StepGraphon(std::move(v));
}

bool StepGraphon::is_constant() const {
    double first = values(0, 0);
    return (values.array() == first).all();
}

StepGraphon load_graphon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graphon file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("graphon file " + path + ": " + e.what());
    }
    if (j.contains("constant")) {
        return StepGraphon::constant(j.at("constant").get<double>());
    }
    int b = j.at("blocks").get<int>();
    auto flat = j.at("values").get<std::vector<double>>();
    if (static_cast<int>(flat.size()) != b * b) {
        throw ParseError("graphon file " + path + ": values array must have blocks^2 entries");
    }
    Eigen::MatrixXd v(b, b);
    for (int i = 0; i < b; ++i) {
        for (int k = 0; k < b; ++k) v(i, k) = flat[static_cast<std::size_t>(i * b + k)];
    }
    return StepGraphon(std::move(v));
}

std::string format_graphon_json(const StepGraphon& g) {
    nlohmann::json j;
    if (g.blocks() == 1) {
        j["constant"] = g.values(0, 0);
    } else {
        j["blocks"] = g.blocks();
        std::vector<double> flat;
        for (int i = 0; i < g.blocks(); ++i) {
            for (int k = 0; k < g.blocks(); ++k) flat.push_back(g.values(i, k));
        }
        j["values"] = flat;
    }
    return j.dump(2) + "\n";
}

YDiscretization discretize_edge_variable(const StepGraphon& g) {
    std::set<double> cuts;
    for (int i = 0; i < g.blocks(); ++i) {
        for (int j = 0; j < g.blocks(); ++j) cuts.insert(g.values(i, j));
    }
    cuts.insert(1.0);
    std::vector<double> uppers;
    std::vector<double> lengths;
    double lo = 0.0;
    for (double c : cuts) {
        if (c > lo) {
            uppers.push_back(c);
            lengths.push_back(c - lo);
            lo = c;
        }
    }
    if (uppers.empty()) {
        uppers.push_back(1.0);
        lengths.push_back(1.0);
    }
    YDiscretization d;
    d.boundaries = Eigen::Map<Eigen::VectorXd>(uppers.data(), static_cast<Eigen::Index>(uppers.size()));
    Eigen::VectorXd probs = Eigen::Map<Eigen::VectorXd>(lengths.data(), static_cast<Eigen::Index>(lengths.size()));
    Eigen::VectorXd atoms(probs.size());
    if (g.is_constant() && probs.size() == 2) {
        atoms << 1.0, 0.0;  // indicator values for the {below, above} atoms
    } else {
        atoms = d.boundaries;
    }
    d.space = DiscreteSpace(std::move(atoms), std::move(probs));
    return d;
}

DiscreteSpace block_space(const StepGraphon& g) {
    int b = g.blocks();
    Eigen::VectorXd atoms(b), probs(b);
    for (int i = 0; i < b; ++i) {
        atoms[i] = static_cast<double>(i);
        probs[i] = 1.0 / b;
    }
    return DiscreteSpace(std::move(atoms), std::move(probs));
}

LatentSample sample_latents(const StepGraphon& g, const YDiscretization& disc, int n,
                            std::uint64_t seed, std::uint64_t replicate) {
    if (n < 1) throw ArgumentError("sample needs n >= 1");
    std::uint64_t key = rng::key(seed, static_cast<std::uint64_t>(n), replicate);
    LatentSample s;
    s.n = n;
    s.blocks.resize(n);
    int b = g.blocks();
    for (int i = 0; i < n; ++i) {
        double u = rng::uniform(key, rng::kStreamLatent, static_cast<std::uint64_t>(i));
        int block = static_cast<int>(u * b);
        s.blocks[i] = block >= b ? b - 1 : block;
    }
    s.y_atoms = Eigen::MatrixXi::Constant(n, n, -1);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double u = rng::uniform(key, rng::kStreamEdge, static_cast<std::uint64_t>(pair_rank(i, j, n)));
            int atom = disc.atom_of(u);
            s.y_atoms(i, j) = atom;
            s.y_atoms(j, i) = atom;
        }
    }
    return s;
}

GraphSample to_graph_sample(const StepGraphon& g, const YDiscretization& disc,
                            const LatentSample& latents, std::uint64_t seed) {
    GraphSample out;
    out.n = latents.n;
    out.x_latent = latents.blocks;
    out.seed = seed;
    out.adjacency = Eigen::MatrixXi::Zero(latents.n, latents.n);
    for (int i = 0; i < latents.n; ++i) {
        for (int j = i + 1; j < latents.n; ++j) {
            int bit = disc.edge_indicator(latents.y_atoms(i, j), g(latents.blocks[i], latents.blocks[j]));
            out.adjacency(i, j) = bit;
            out.adjacency(j, i) = bit;
        }
    }
    return out;
}

GraphSample sample(const StepGraphon& g, int n, std::uint64_t seed) {
    YDiscretization disc = discretize_edge_variable(g);
    return to_graph_sample(g, disc, sample_latents(g, disc, n, seed), seed);
}

double density_inj(const Motif& f, const StepGraphon& g) {
    int v = f.vertex_count;
    int b = g.blocks();
    std::vector<int> assign(static_cast<std::size_t>(v), 0);
    double total = 0.0;
    while (true) {
        double prod = 1.0;
        for (const auto& [i, j] : f.edges) {
            prod *= g(assign[static_cast<std::size_t>(i)], assign[static_cast<std::size_t>(j)]);
            if (prod == 0.0) break;
        }
        total += prod;
        int pos = v - 1;
        while (pos >= 0 && ++assign[static_cast<std::size_t>(pos)] == b) assign[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return total / std::pow(static_cast<double>(b), v);
}

double density_ind(const Motif& f, const StepGraphon& g) {
    int v = f.vertex_count;
    int b = g.blocks();
    std::vector<int> assign(static_cast<std::size_t>(v), 0);
    double total = 0.0;
    while (true) {
        double prod = 1.0;
        for (int i = 0; i < v && prod != 0.0; ++i) {
            for (int j = i + 1; j < v && prod != 0.0; ++j) {
                double k_ij = g(assign[static_cast<std::size_t>(i)], assign[static_cast<std::size_t>(j)]);
                prod *= f.has_edge(i, j) ? k_ij : 1.0 - k_ij;
            }
        }
        total += prod;
        int pos = v - 1;
        while (pos >= 0 && ++assign[static_cast<std::size_t>(pos)] == b) assign[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return total / std::pow(static_cast<double>(b), v);
}

CountMode parse_count_mode(const std::string& text) {
    if (text == "inj") return CountMode::Injective;
    if (text == "ind") return CountMode::Induced;
    throw ParseError("mode must be inj or ind, got '" + text + "'");
}

std::string to_string(CountMode mode) {
    return mode == CountMode::Injective ? "inj" : "ind";
}

double expected_count(const Motif& f, const StepGraphon& g, int n, CountMode mode) {
    int k = f.vertex_count;
    if (n < k) throw ArgumentError("expected_count needs n >= v(F)");
    double t = mode == CountMode::Injective ? density_inj(f, g) : density_ind(f, g);
    double copies = static_cast<double>(factorial_u64(k)) / static_cast<double>(automorphism_count(f));
    return binomial(n, k) * copies * t;
}

std::string format_graph_sample(const GraphSample& s) {
    std::ostringstream out;
    out << "n " << s.n << " seed " << s.seed << "\n";
    for (int i = 0; i < s.n; ++i) {
        for (int j = i + 1; j < s.n; ++j) {
            if (s.adjacency(i, j)) out << i << " " << j << "\n";
        }
    }
    return out.str();
}

GraphSample parse_graph_sample(std::istream& in) {
    std::string tag_n, tag_seed;
    GraphSample s;
    long long n = 0;
    unsigned long long seed = 0;
    if (!(in >> tag_n >> n >> tag_seed >> seed) || tag_n != "n" || tag_seed != "seed" || n < 1) {
        throw ParseError("graph file: bad header, expected 'n <n> seed <seed>'");
    }
    s.n = static_cast<int>(n);
    s.seed = seed;
    s.x_latent = Eigen::VectorXi::Zero(s.n);
    s.adjacency = Eigen::MatrixXi::Zero(s.n, s.n);
    int i = 0, j = 0;
    while (in >> i >> j) {
        if (i < 0 || j < 0 || i >= s.n || j >= s.n || i == j) throw ParseError("graph file: bad edge");
        s.adjacency(i, j) = 1;
        s.adjacency(j, i) = 1;
    }
    return s;
}

}  // namespace ustatlab
