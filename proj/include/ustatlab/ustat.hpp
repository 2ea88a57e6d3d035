#ifndef USTATLAB_USTAT_HPP
#define USTATLAB_USTAT_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ustatlab/graphon.hpp"
#include "ustatlab/hoeffding.hpp"
#include "ustatlab/kernel.hpp"

namespace ustatlab {

/// One realization of the latent variables: atom indices for every vertex
/// and every unordered pair.
struct Configuration {
    int n = 0;
    Eigen::VectorXi x;  // atom index per vertex
    Eigen::MatrixXi y;  // symmetric atom index per pair, diagonal -1
};

Configuration configuration_from_latents(const LatentSample& latents);

/// S_{n,k}(f): sum of f over all increasing k-tuples of vertices.
double evaluate_ustat(const Kernel& f, const Configuration& c);

/// Packed adjacency rows; the workhorse for counting.
struct BitAdjacency {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> bits;
    std::vector<int> degree;

    void init(int vertices);
    void set_edge(int i, int j);
    bool has_edge(int i, int j) const;
    const std::uint64_t* row(int i) const { return bits.data() + static_cast<std::size_t>(i) * words; }
};

BitAdjacency bit_adjacency(const GraphSample& g);

struct GraphStats {
    std::int64_t edges = 0;
    std::int64_t two_stars = 0;
    std::int64_t triangles = 0;
};

GraphStats graph_stats(const BitAdjacency& a);

/// Injective or induced copy count of F. Motifs on <= 3 vertices go through
/// closed forms in (edges, 2-stars, triangles); larger motifs enumerate
/// vertex subsets against the embedding masks.
std::int64_t count_subgraphs(const BitAdjacency& a, const Motif& f, CountMode mode);
std::int64_t count_subgraphs(const GraphSample& g, const Motif& f, CountMode mode);

struct VarianceRow {
    std::vector<int> a;
    std::vector<std::pair<int, int>> b;
    int v = 0;
    double sigma = 0.0;
    std::int64_t aut = 1;  // automorphisms of the support graph preserving A
    double contribution = 0.0;
};

struct VarianceReport {
    double sigma_n_sq = 0.0;
    std::map<int, double> per_level;
    std::vector<VarianceRow> rows;
};

/// Exact Var{S_{n,k}(f)} from the orthogonal expansion: each projection
/// (A,B) at level l = v_{A,B} contributes C(n,k) * C(n-l,k-l) * sigma_{A,B}^2.
/// Binomials are evaluated in exact integer arithmetic first.
VarianceReport variance_closed_form(const Decomposition& dec, int n);

/// Independent check: exact Var{S_{n,k}(f)} by full enumeration of all
/// configurations with their probabilities. Rejects state spaces above 1e7.
double variance_oracle(const Kernel& f, int n);

/// E{S_{n,k}(f)} = C(n,k) E{f}.
double exact_mean(const Kernel& f, int n);
double exact_mean(const Decomposition& dec, int n);

std::string format_variance_report(const VarianceReport& r);

}  // namespace ustatlab

#endif
