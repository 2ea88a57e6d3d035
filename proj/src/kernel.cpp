#include "ustatlab/kernel.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace ustatlab {

double Kernel::weight(const std::vector<int>& digits) const {
    double w = 1.0;
    for (int pos = 0; pos < k; ++pos) w *= x_space.probs[digits[static_cast<std::size_t>(pos)]];
    int pairs = k * (k - 1) / 2;
    for (int pos = 0; pos < pairs; ++pos) w *= y_space.probs[digits[static_cast<std::size_t>(k + pos)]];
    return w;
}

double Kernel::mean() const {
    JointIndexer idx = indexer();
    std::vector<int> digits(static_cast<std::size_t>(idx.digit_count()), 0);
    double total = 0.0;
    std::int64_t i = 0;
    do {
        total += weight(digits) * table[i++];
    } while (idx.next(digits));
    return total;
}

double Kernel::moment4() const {
    JointIndexer idx = indexer();
    std::vector<int> digits(static_cast<std::size_t>(idx.digit_count()), 0);
    double total = 0.0;
    std::int64_t i = 0;
    do {
        double v = table[i++];
        total += weight(digits) * v * v * v * v;
    } while (idx.next(digits));
    return total;
}

Kernel make_kernel(int k, DiscreteSpace x_space, DiscreteSpace y_space, Eigen::VectorXd table) {
    Kernel f;
    f.k = k;
    f.x_space = std::move(x_space);
    f.y_space = std::move(y_space);
    f.table = std::move(table);
    JointIndexer idx = f.indexer();
    if (f.table.size() != idx.size()) {
        throw ValidationError("kernel table size does not match alphabet sizes");
    }
    return f;
}

namespace {

// Index permutation induced on the table by the vertex permutation perm:
// entry at (x, y) moves to (x o perm, y o perm).
std::vector<std::int64_t> table_permutation(const JointIndexer& idx, const std::vector<int>& perm) {
    int k = idx.k();
    auto pairs = canonical_pairs(k);
    std::vector<std::int64_t> map(static_cast<std::size_t>(idx.size()));
    std::vector<int> digits, permuted(static_cast<std::size_t>(idx.digit_count()));
    digits.assign(static_cast<std::size_t>(idx.digit_count()), 0);
    std::int64_t i = 0;
    do {
        for (int v = 0; v < k; ++v) {
            permuted[static_cast<std::size_t>(v)] = digits[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])];
        }
        for (int p = 0; p < idx.pair_count(); ++p) {
            auto [a, b] = pairs[static_cast<std::size_t>(p)];
            int pr = pair_rank(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)], k);
            permuted[static_cast<std::size_t>(k + p)] = digits[static_cast<std::size_t>(k + pr)];
        }
        map[static_cast<std::size_t>(i++)] = idx.encode(permuted);
    } while (idx.next(digits));
    return map;
}

}  // namespace

bool check_symmetry(const Kernel& f) {
    JointIndexer idx = f.indexer();
    std::vector<int> perm(static_cast<std::size_t>(f.k));
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end())) {
        auto map = table_permutation(idx, perm);
        for (std::int64_t i = 0; i < idx.size(); ++i) {
            if (f.table[i] != f.table[map[static_cast<std::size_t>(i)]]) return false;
        }
    }
    return true;
}

Kernel symmetrize(const Kernel& f) {
    JointIndexer idx = f.indexer();
    std::vector<std::vector<std::int64_t>> maps;
    std::vector<int> perm(static_cast<std::size_t>(f.k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        maps.push_back(table_permutation(idx, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));

    // One exact value per orbit: averaging each entry separately would break
    // the bitwise-equality symmetry check through reassociation.
    Kernel out = f;
    std::vector<char> done(static_cast<std::size_t>(idx.size()), 0);
    std::vector<std::int64_t> orbit;
    for (std::int64_t i = 0; i < idx.size(); ++i) {
        if (done[static_cast<std::size_t>(i)]) continue;
        orbit.clear();
        for (const auto& map : maps) orbit.push_back(map[static_cast<std::size_t>(i)]);
        std::sort(orbit.begin(), orbit.end());
        orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
        double total = 0.0;
        for (std::int64_t j : orbit) total += f.table[j];
        double value = total / static_cast<double>(orbit.size());
        for (std::int64_t j : orbit) {
            out.table[j] = value;
            done[static_cast<std::size_t>(j)] = 1;
        }
    }
    return out;
}

Kernel make_er_edge_kernel(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("edge kernel needs p in (0,1)");
    Eigen::VectorXd y_atoms(2), y_probs(2);
    y_atoms << 1.0, 0.0;
    y_probs << p, 1.0 - p;
    Eigen::VectorXd table(2);
    table << 1.0, 0.0;  // f = y
    return make_kernel(2, single_atom_space(), DiscreteSpace(y_atoms, y_probs), std::move(table));
}

Kernel make_rademacher_kernel() {
    Eigen::VectorXd x_atoms(2), x_probs(2);
    x_atoms << -1.0, 1.0;
    x_probs << 0.5, 0.5;
    Eigen::VectorXd table(2);
    table << -1.0, 1.0;
    return make_kernel(1, DiscreteSpace(x_atoms, x_probs), single_atom_space(), std::move(table));
}

Kernel make_subgraph_kernel(const Motif& f, const StepGraphon& g, CountMode mode) {
    int k = f.vertex_count;
    DiscreteSpace xs = block_space(g);
    YDiscretization disc = discretize_edge_variable(g);
    JointIndexer idx(k, xs.size(), disc.space.size());
    auto pairs = canonical_pairs(k);
    auto embeddings = isomorphic_embeddings(f, k);

    // Embedding edge sets as bitmasks over canonical pair order.
    std::vector<std::uint32_t> masks;
    for (const auto& emb : embeddings) {
        std::uint32_t m = 0;
        for (const auto& [a, b] : emb) m |= 1u << pair_rank(a, b, k);
        masks.push_back(m);
    }
    std::uint32_t full = idx.pair_count() == 32 ? ~0u : (1u << idx.pair_count()) - 1u;

    Eigen::VectorXd table(idx.size());
    std::vector<int> digits(static_cast<std::size_t>(idx.digit_count()), 0);
    std::int64_t i = 0;
    do {
        std::uint32_t present = 0;
        for (int p = 0; p < idx.pair_count(); ++p) {
            auto [a, b] = pairs[static_cast<std::size_t>(p)];
            int bi = static_cast<int>(xs.atoms[digits[static_cast<std::size_t>(a)]]);
            int bj = static_cast<int>(xs.atoms[digits[static_cast<std::size_t>(b)]]);
            if (disc.edge_indicator(digits[static_cast<std::size_t>(k + p)], g(bi, bj))) present |= 1u << p;
        }
        double value = 0.0;
        for (std::uint32_t m : masks) {
            if (mode == CountMode::Injective) {
                if ((present & m) == m) value += 1.0;
            } else {
                if ((present & full) == m) value += 1.0;
            }
        }
        table[i++] = value;
    } while (idx.next(digits));
    return make_kernel(k, std::move(xs), disc.space, std::move(table));
}

Kernel load_kernel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open kernel file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("kernel file " + path + ": " + e.what());
    }
    if (j.contains("builtin")) {
        std::string builtin = j.at("builtin").get<std::string>();
        CountMode mode;
        if (builtin == "subgraph-inj") mode = CountMode::Injective;
        else if (builtin == "subgraph-ind") mode = CountMode::Induced;
        else throw ParseError("kernel file " + path + ": unknown builtin '" + builtin + "'");
        std::string motif_path = j.at("motif").get<std::string>();
        if (!std::filesystem::path(motif_path).is_absolute()) {
            motif_path = (std::filesystem::path(path).parent_path() / motif_path).string();
        }
        Motif f = load_motif(motif_path);
        StepGraphon g;
        if (j.contains("graphon")) {
            std::string gp = j.at("graphon").get<std::string>();
            if (!std::filesystem::path(gp).is_absolute()) {
                gp = (std::filesystem::path(path).parent_path() / gp).string();
            }
            g = load_graphon(gp);
        } else {
            g = StepGraphon::constant(j.at("p").get<double>());
        }
        return make_subgraph_kernel(f, g, mode);
    }
    int k = j.at("k").get<int>();
    auto xa = j.at("x_atoms").get<std::vector<double>>();
    auto xp = j.at("x_probs").get<std::vector<double>>();
    auto ya = j.at("y_atoms").get<std::vector<double>>();
    auto yp = j.at("y_probs").get<std::vector<double>>();
    auto tv = j.at("table").get<std::vector<double>>();
    auto to_vec = [](const std::vector<double>& v) {
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
    };
    DiscreteSpace xs(to_vec(xa), to_vec(xp));
    DiscreteSpace ys(to_vec(ya), to_vec(yp));
    return make_kernel(k, std::move(xs), std::move(ys), to_vec(tv));
}

std::string format_kernel_json(const Kernel& f) {
    nlohmann::json j;
    j["k"] = f.k;
    auto to_std = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    j["x_atoms"] = to_std(f.x_space.atoms);
    j["x_probs"] = to_std(f.x_space.probs);
    j["y_atoms"] = to_std(f.y_space.atoms);
    j["y_probs"] = to_std(f.y_space.probs);
    j["table"] = to_std(f.table);
    return j.dump(2) + "\n";
}

}  // namespace ustatlab
