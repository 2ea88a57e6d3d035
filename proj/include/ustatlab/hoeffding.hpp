#ifndef USTATLAB_HOEFFDING_HPP
#define USTATLAB_HOEFFDING_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ustatlab/kernel.hpp"
#include "ustatlab/motif.hpp"

namespace ustatlab {

/// One projection f_{A,B} of the orthogonal kernel expansion.
struct HoeffdingComponent {
    std::vector<int> a;                 // sorted vertex positions, 0-based
    std::vector<std::pair<int, int>> b; // sorted pair positions
    Eigen::VectorXd table;              // over (x_A, y_B) assignments, SubIndexer order
    double sigma = 0.0;                 // L2 norm of the projection
    std::vector<int> support;           // sorted A united with endpoints(B)
    Motif support_graph;                // compact relabeling of (support, B)
    std::vector<int> marked;            // relabeled positions of A inside support
    int v = 0;                          // support size

    bool is_mean() const { return a.empty() && b.empty(); }
};

struct Decomposition {
    Kernel kernel;
    std::vector<HoeffdingComponent> components;  // ordered by (|A|+|B|, masks)

    const HoeffdingComponent& mean_component() const { return components.front(); }
    const HoeffdingComponent* find(const std::vector<int>& a,
                                   const std::vector<std::pair<int, int>>& b) const;

    /// Component table value at a full joint assignment.
    double component_value(const HoeffdingComponent& c, const std::vector<int>& digits) const;

    /// Level kernel f_(level) as a full-size table; level 0 is the constant
    /// mean, level >= 1 sums the components with support size == level.
    Eigen::VectorXd level_kernel(int level) const;
};

/// Exact decomposition by inclusion-exclusion over conditional expectation
/// tables. Rejects non-symmetric kernels and state spaces above 1e8.
Decomposition hoeffding_decompose(const Kernel& f);

struct KernelSummary {
    int d = 0;                           // principal degree
    std::vector<int> principal;          // indices into components
    double sigma1 = 0.0;                 // norm of the ({1}, {}) projection
    double sigma_min = 0.0;              // min norm over principal components
    double tau = 0.0;                    // ||f||_4
    double zero_tol = 0.0;               // sigma threshold used
    bool all_connected = false;
    bool all_strongly_connected = false;
    bool y_only = false;                 // every component with nonempty A vanishes
};

/// Requires a non-constant kernel; throws DegenerateError otherwise.
KernelSummary summarize(const Decomposition& dec);

/// Explicit Erdos-Renyi projection tables (constant graphon, Bernoulli edge
/// atoms in the order {1, 0}): the single-edge projection for injective
/// counts, plus the 2-star and triangle projections for induced counts when
/// v(F) >= 3.
struct ClosedFormProjections {
    Eigen::VectorXd single_edge;                 // index = y atom
    std::optional<Eigen::VectorXd> two_star;     // index = y12 atom * 2 + y13 atom
    std::optional<Eigen::VectorXd> triangle;     // index over (y12, y13, y23)
};

ClosedFormProjections er_closed_form_projections(const Motif& f, double p, CountMode mode);

std::string format_decomposition(const Decomposition& dec, const KernelSummary* summary);

}  // namespace ustatlab

#endif
