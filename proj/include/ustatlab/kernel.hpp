#ifndef USTATLAB_KERNEL_HPP
#define USTATLAB_KERNEL_HPP

#include <Eigen/Dense>
#include <string>

#include "ustatlab/discrete.hpp"
#include "ustatlab/graphon.hpp"
#include "ustatlab/motif.hpp"

namespace ustatlab {

/// Symmetric kernel on k vertex variables and k(k-1)/2 edge variables over
/// finite alphabets, stored as a dense table in canonical index order
/// (x_1 most significant, see JointIndexer).
struct Kernel {
    int k = 1;
    DiscreteSpace x_space;
    DiscreteSpace y_space;
    Eigen::VectorXd table;

    JointIndexer indexer() const { return JointIndexer(k, x_space.size(), y_space.size()); }

    /// Probability of one joint assignment (product of atom probabilities).
    double weight(const std::vector<int>& digits) const;

    double mean() const;
    double moment4() const;  // E f^4
};

Kernel make_kernel(int k, DiscreteSpace x_space, DiscreteSpace y_space, Eigen::VectorXd table);

/// true iff the table is invariant under all k! simultaneous permutations of
/// vertex coordinates and induced pair coordinates, exactly.
bool check_symmetry(const Kernel& f);

/// Averages the table over all k! coordinate permutations.
Kernel symmetrize(const Kernel& f);

/// Erdos-Renyi edge indicator: k = 2, trivial X, Y = {1, 0} w.p. {p, 1-p},
/// f(x; y) = y.
Kernel make_er_edge_kernel(double p);

/// k = 1 kernel f(x) = x on atoms {-1, +1}, equiprobable.
Kernel make_rademacher_kernel();

/// Subgraph-count kernel phi_F over the exact discretization of a graphon:
/// evaluates the injective or induced indicator sum over all embeddings of F.
Kernel make_subgraph_kernel(const Motif& f, const StepGraphon& g, CountMode mode);

/// Kernel spec file (JSON): either
///   {"builtin": "subgraph-inj"|"subgraph-ind", "motif": <path>, "p": <real>}
/// (optionally "graphon": <path> instead of "p"), or an explicit table
///   {"k":., "x_atoms":[..], "x_probs":[..], "y_atoms":[..], "y_probs":[..],
///    "table":[..]}  with the table flat in canonical index order.
Kernel load_kernel(const std::string& path);
std::string format_kernel_json(const Kernel& f);

}  // namespace ustatlab

#endif
