#ifndef USTATLAB_GRAPHON_HPP
#define USTATLAB_GRAPHON_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "ustatlab/discrete.hpp"
#include "ustatlab/motif.hpp"

namespace ustatlab {

/// Symmetric piecewise-constant graphon on equal-mass blocks.
struct StepGraphon {
    Eigen::MatrixXd values;  // b x b, symmetric, entries in [0,1]

    StepGraphon() = default;
    explicit StepGraphon(Eigen::MatrixXd v);
    static StepGraphon constant(double p);

    int blocks() const { return static_cast<int>(values.rows()); }
    bool is_constant() const;
    double operator()(int block_i, int block_j) const { return values(block_i, block_j); }
};

StepGraphon load_graphon(const std::string& path);
std::string format_graphon_json(const StepGraphon& g);

/// Exact discretization of the latent edge variable Y ~ U[0,1]: atoms are the
/// intervals cut by the sorted distinct graphon values (plus 1), so the edge
/// indicator 1[Y <= kappa(x_i,x_j)] is constant on every atom.
///
/// For a constant graphon the two atoms carry the indicator values {1, 0};
/// otherwise atom values are the interval upper endpoints.
struct YDiscretization {
    DiscreteSpace space;
    Eigen::VectorXd boundaries;  // interval upper endpoints, increasing, last == 1

    int atom_of(double u) const {
        for (Eigen::Index a = 0; a + 1 < boundaries.size(); ++a) {
            if (u <= boundaries[a]) return static_cast<int>(a);
        }
        return static_cast<int>(boundaries.size()) - 1;
    }

    int edge_indicator(int atom, double kappa) const {
        return boundaries[atom] <= kappa ? 1 : 0;
    }
};

YDiscretization discretize_edge_variable(const StepGraphon& g);

/// Uniform block alphabet for the latent vertex variable.
DiscreteSpace block_space(const StepGraphon& g);

/// Latent configuration behind one graph draw: block indices and edge atoms.
struct LatentSample {
    int n = 0;
    Eigen::VectorXi blocks;
    Eigen::MatrixXi y_atoms;  // symmetric, diagonal -1
};

struct GraphSample {
    int n = 0;
    Eigen::VectorXi x_latent;   // block indices
    Eigen::MatrixXi adjacency;  // symmetric 0/1, zero diagonal
    std::uint64_t seed = 0;
};

/// Draws the latent configuration for replicate `replicate` of the stream
/// keyed by (seed, n). Pure function of its arguments.
LatentSample sample_latents(const StepGraphon& g, const YDiscretization& disc, int n,
                            std::uint64_t seed, std::uint64_t replicate = 0);

GraphSample to_graph_sample(const StepGraphon& g, const YDiscretization& disc,
                            const LatentSample& latents, std::uint64_t seed);

/// G(n, kappa) draw: latent blocks uniform, edges independent given blocks.
GraphSample sample(const StepGraphon& g, int n, std::uint64_t seed);

/// Homomorphism-type density t_F: exact block sum of prod kappa over E(F).
double density_inj(const Motif& f, const StepGraphon& g);

/// Induced density: also multiplies (1 - kappa) over the non-edges of K_v.
double density_ind(const Motif& f, const StepGraphon& g);

enum class CountMode { Injective, Induced };

CountMode parse_count_mode(const std::string& text);
std::string to_string(CountMode mode);

/// E{T_F} = C(n,k) * k!/|Aut(F)| * density.
double expected_count(const Motif& f, const StepGraphon& g, int n, CountMode mode);

/// Edge-list export, header "n <n> seed <seed>".
std::string format_graph_sample(const GraphSample& s);
GraphSample parse_graph_sample(std::istream& in);

}  // namespace ustatlab

#endif
