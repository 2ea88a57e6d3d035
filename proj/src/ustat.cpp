#include "ustatlab/ustat.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>

namespace ustatlab {

Configuration configuration_from_latents(const LatentSample& latents) {
    Configuration c;
    c.n = latents.n;
    c.x = latents.blocks;
    c.y = latents.y_atoms;
    return c;
}

namespace {

// Lexicographically next increasing k-subset of [0, n); false when done.
bool next_combination(std::vector<int>& comb, int n) {
    int k = static_cast<int>(comb.size());
    for (int pos = k - 1; pos >= 0; --pos) {
        if (comb[static_cast<std::size_t>(pos)] < n - k + pos) {
            ++comb[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < k; ++q) {
                comb[static_cast<std::size_t>(q)] = comb[static_cast<std::size_t>(q - 1)] + 1;
            }
            return true;
        }
    }
    return false;
}

}  // namespace

double evaluate_ustat(const Kernel& f, const Configuration& c) {
    int k = f.k;
    int n = c.n;
    if (n < k) throw ArgumentError("evaluate_ustat needs n >= k");
    if (binomial(n, k) > 1e8) throw CapabilityError("too many index tuples (above 1e8)");
    JointIndexer idx = f.indexer();
    auto pairs = canonical_pairs(k);
    std::vector<int> comb(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
    std::vector<int> digits(static_cast<std::size_t>(idx.digit_count()));
    long double total = 0.0L;
    do {
        for (int i = 0; i < k; ++i) digits[static_cast<std::size_t>(i)] = c.x[comb[static_cast<std::size_t>(i)]];
        for (int p = 0; p < idx.pair_count(); ++p) {
            auto [a, b] = pairs[static_cast<std::size_t>(p)];
            digits[static_cast<std::size_t>(k + p)] = c.y(comb[static_cast<std::size_t>(a)], comb[static_cast<std::size_t>(b)]);
        }
        total += f.table[idx.encode(digits)];
    } while (next_combination(comb, n));
    return static_cast<double>(total);
}

void BitAdjacency::init(int vertices) {
    n = vertices;
    words = (vertices + 63) / 64;
    bits.assign(static_cast<std::size_t>(n) * words, 0);
    degree.assign(static_cast<std::size_t>(n), 0);
}

void BitAdjacency::set_edge(int i, int j) {
    bits[static_cast<std::size_t>(i) * words + j / 64] |= 1ULL << (j % 64);
    bits[static_cast<std::size_t>(j) * words + i / 64] |= 1ULL << (i % 64);
    ++degree[static_cast<std::size_t>(i)];
    ++degree[static_cast<std::size_t>(j)];
}

bool BitAdjacency::has_edge(int i, int j) const {
    return (bits[static_cast<std::size_t>(i) * words + j / 64] >> (j % 64)) & 1ULL;
}

BitAdjacency bit_adjacency(const GraphSample& g) {
    BitAdjacency a;
    a.init(g.n);
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            if (g.adjacency(i, j)) a.set_edge(i, j);
        }
    }
    return a;
}

GraphStats graph_stats(const BitAdjacency& a) {
    GraphStats s;
    for (int i = 0; i < a.n; ++i) {
        std::int64_t d = a.degree[static_cast<std::size_t>(i)];
        s.edges += d;
        s.two_stars += d * (d - 1) / 2;
    }
    s.edges /= 2;
    std::int64_t closed = 0;  // 3x the triangle count
    for (int i = 0; i < a.n; ++i) {
        const std::uint64_t* ri = a.row(i);
        for (int j = i + 1; j < a.n; ++j) {
            if (!a.has_edge(i, j)) continue;
            const std::uint64_t* rj = a.row(j);
            for (int w = 0; w < a.words; ++w) closed += std::popcount(ri[w] & rj[w]);
        }
    }
    s.triangles = closed / 3;
    return s;
}

namespace {

// How many embeddings of F (on 3 vertices) fit inside each induced class of
// a vertex triple; classes on 3 vertices are indexed by edge count.
std::array<std::int64_t, 4> triple_embedding_table(const Motif& f) {
    static const std::uint32_t class_mask[4] = {0u, 1u, 3u, 7u};  // pairs (01),(02),(12)
    std::array<std::int64_t, 4> m{};
    for (const auto& emb : isomorphic_embeddings(f, 3)) {
        std::uint32_t em = 0;
        for (const auto& [a, b] : emb) em |= 1u << pair_rank(a, b, 3);
        for (int c = 0; c < 4; ++c) {
            if ((class_mask[c] & em) == em) ++m[static_cast<std::size_t>(c)];
        }
    }
    return m;
}

std::int64_t count_general(const BitAdjacency& a, const Motif& f, CountMode mode) {
    int k = f.vertex_count;
    auto embeddings = isomorphic_embeddings(f, k);
    std::vector<std::uint32_t> masks;
    for (const auto& emb : embeddings) {
        std::uint32_t m = 0;
        for (const auto& [i, j] : emb) m |= 1u << pair_rank(i, j, k);
        masks.push_back(m);
    }
    double work = binomial(a.n, k) * static_cast<double>(masks.size());
    if (work > 2e8) throw CapabilityError("subgraph enumeration too large");
    std::sort(masks.begin(), masks.end());

    std::vector<int> comb(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
    auto pairs = canonical_pairs(k);
    std::int64_t total = 0;
    do {
        std::uint32_t present = 0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            auto [i, j] = pairs[p];
            if (a.has_edge(comb[static_cast<std::size_t>(i)], comb[static_cast<std::size_t>(j)])) {
                present |= 1u << p;
            }
        }
        if (mode == CountMode::Injective) {
            for (std::uint32_t m : masks) {
                if ((present & m) == m) ++total;
            }
        } else {
            if (std::binary_search(masks.begin(), masks.end(), present)) ++total;
        }
    } while (next_combination(comb, a.n));
    return total;
}

}  // namespace

std::int64_t count_subgraphs(const BitAdjacency& a, const Motif& f, CountMode mode) {
    int k = f.vertex_count;
    std::int64_t n = a.n;
    if (k > a.n) throw ArgumentError("count_subgraphs needs v(F) <= n");
    if (k == 1) return n;
    GraphStats st = graph_stats(a);
    if (k == 2) {
        if (f.edge_count() == 1) return st.edges;
        return mode == CountMode::Injective ? n * (n - 1) / 2 : n * (n - 1) / 2 - st.edges;
    }
    if (k == 3) {
        std::int64_t n3 = st.triangles;
        std::int64_t n2 = st.two_stars - 3 * st.triangles;
        std::int64_t n1 = st.edges * (n - 2) - 2 * n2 - 3 * n3;
        std::int64_t n0 = n * (n - 1) * (n - 2) / 6 - n1 - n2 - n3;
        std::array<std::int64_t, 4> by_class{n0, n1, n2, n3};
        if (mode == CountMode::Induced) return by_class[static_cast<std::size_t>(f.edge_count())];
        auto m = triple_embedding_table(f);
        std::int64_t total = 0;
        for (int c = 0; c < 4; ++c) total += by_class[static_cast<std::size_t>(c)] * m[static_cast<std::size_t>(c)];
        return total;
    }
    return count_general(a, f, mode);
}

std::int64_t count_subgraphs(const GraphSample& g, const Motif& f, CountMode mode) {
    return count_subgraphs(bit_adjacency(g), f, mode);
}

VarianceReport variance_closed_form(const Decomposition& dec, int n) {
    int k = dec.kernel.k;
    if (n < k) throw ArgumentError("variance_closed_form needs n >= k");
    VarianceReport r;
    long double total = 0.0L;
    for (const auto& c : dec.components) {
        if (c.is_mean()) continue;
        int level = c.v;
        u128 coef = binomial_u128(n, k) * binomial_u128(n - level, k - level);
        double contribution = static_cast<double>(coef) * c.sigma * c.sigma;
        VarianceRow row;
        row.a = c.a;
        row.b = c.b;
        row.v = level;
        row.sigma = c.sigma;
        row.aut = marked_automorphism_count(c.support_graph, c.marked);
        row.contribution = contribution;
        r.rows.push_back(std::move(row));
        r.per_level[level] += contribution;
        total += contribution;
    }
    r.sigma_n_sq = static_cast<double>(total);
    return r;
}

double variance_oracle(const Kernel& f, int n) {
    int k = f.k;
    if (n < k) throw ArgumentError("variance_oracle needs n >= k");
    int nx = f.x_space.size();
    int ny = f.y_space.size();
    int pair_count = n * (n - 1) / 2;
    double states = std::pow(nx, n) * std::pow(ny, pair_count);
    if (states > 1e7) throw CapabilityError("oracle state space above 1e7 configurations");

    Configuration c;
    c.n = n;
    c.x = Eigen::VectorXi::Zero(n);
    c.y = Eigen::MatrixXi::Zero(n, n);
    c.y.diagonal().setConstant(-1);

    auto pairs = canonical_pairs(n);
    std::vector<int> digits(static_cast<std::size_t>(n + pair_count), 0);
    auto apply = [&] {
        for (int i = 0; i < n; ++i) c.x[i] = digits[static_cast<std::size_t>(i)];
        for (int p = 0; p < pair_count; ++p) {
            auto [i, j] = pairs[static_cast<std::size_t>(p)];
            c.y(i, j) = digits[static_cast<std::size_t>(n + p)];
            c.y(j, i) = digits[static_cast<std::size_t>(n + p)];
        }
    };
    auto prob = [&] {
        double w = 1.0;
        for (int i = 0; i < n; ++i) w *= f.x_space.probs[digits[static_cast<std::size_t>(i)]];
        for (int p = 0; p < pair_count; ++p) w *= f.y_space.probs[digits[static_cast<std::size_t>(n + p)]];
        return w;
    };
    auto advance = [&] {
        int pos = n + pair_count - 1;
        while (pos >= 0) {
            int radix = pos < n ? nx : ny;
            if (++digits[static_cast<std::size_t>(pos)] < radix) return true;
            digits[static_cast<std::size_t>(pos--)] = 0;
        }
        return false;
    };

    // Two passes: exact mean first, then centered second moment.
    long double mean = 0.0L;
    do {
        apply();
        mean += static_cast<long double>(prob()) * evaluate_ustat(f, c);
    } while (advance());

    std::fill(digits.begin(), digits.end(), 0);
    long double var = 0.0L;
    do {
        apply();
        long double d = static_cast<long double>(evaluate_ustat(f, c)) - mean;
        var += static_cast<long double>(prob()) * d * d;
    } while (advance());
    return static_cast<double>(var);
}

double exact_mean(const Kernel& f, int n) {
    if (n < f.k) throw ArgumentError("exact_mean needs n >= k");
    return binomial(n, f.k) * f.mean();
}

double exact_mean(const Decomposition& dec, int n) {
    if (n < dec.kernel.k) throw ArgumentError("exact_mean needs n >= k");
    return binomial(n, dec.kernel.k) * dec.mean_component().table[0];
}

std::string format_variance_report(const VarianceReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "# variance report: A B v sigma aut contribution\n";
    for (const auto& row : r.rows) {
        os << "{";
        for (std::size_t i = 0; i < row.a.size(); ++i) os << (i ? "," : "") << row.a[i];
        os << "} {";
        for (std::size_t i = 0; i < row.b.size(); ++i) {
            os << (i ? "," : "") << "(" << row.b[i].first << "," << row.b[i].second << ")";
        }
        os << "} " << row.v << " " << row.sigma << " " << row.aut << " " << row.contribution << "\n";
    }
    for (const auto& [level, value] : r.per_level) {
        os << "level " << level << " " << value << "\n";
    }
    os << "sigma_n_sq " << r.sigma_n_sq << "\n";
    return os.str();
}

}  // namespace ustatlab
