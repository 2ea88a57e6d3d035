#ifndef USTATLAB_STEIN_HPP
#define USTATLAB_STEIN_HPP

#include <string>
#include <utility>
#include <vector>

#include "ustatlab/hoeffding.hpp"
#include "ustatlab/ustat.hpp"

namespace ustatlab {

struct PairCoefficients {
    double mu = 0.0;
    double nu = 0.0;
};

/// mu_{A,B} = C(n-v, n-k) / (|Aut(G_{A,B})| |B|), nu = |B| mu, where the
/// automorphisms fix the marked set A. B must be nonempty.
PairCoefficients coefficients(const std::vector<int>& a,
                              const std::vector<std::pair<int, int>>& b, int n, int k);

struct SteinPairReport {
    double lambda = 0.0;
    double linearity_residual = 0.0;
    double r_term = 0.0;       // identically 0 for the built-in constructions
    double d_delta_mean = 0.0; // E{D Delta} / (2 lambda)
    std::string construction;
    std::string worst_configuration;
};

/// Vertex-replacement pair for kernels with a first-order projection:
/// D = C(n-1,k-1)/sigma_n (f_1(X_I) - f_1(X_I')). Verifies E{D|X} = W/n
/// exactly over all x-configurations and evaluates E{D Delta}/(2 lambda).
SteinPairReport check_linearity_x_swap(const Decomposition& dec, int n);

/// Edge-replacement pair for principal degree d >= 2 built from the
/// principal projections with weights mu_{A,B}. Verifies
/// E{D|X,Y} = 2 W/(n(n-1)) exactly over all configurations.
/// Refuses disconnected principal support graphs (nonnormal regime).
SteinPairReport check_linearity_edge_swap(const Decomposition& dec, int n);

/// D evaluated at one configuration for the edge-replacement construction;
/// exposed for the antisymmetry property (swapping y_ij with the replacement
/// atom negates D exactly).
double edge_swap_d_value(const Decomposition& dec, int n, const Configuration& c,
                         int i, int j, int replacement_atom);

/// Explicit normal-approximation bound 12 k tau^2 / (sqrt(n) sigma_1^2).
double be_bound_theorem21(const KernelSummary& summary, int k, int n);

/// Bounded solution of the Stein equation f'(w) - w f(w) = 1{w<=z} - Phi(z).
double stein_solution(double z, double w);

/// Derivative of the solution, assembled from the scaled-erfc pieces rather
/// than from the Stein equation itself.
double stein_solution_derivative(double z, double w);

std::string format_stein_report(const SteinPairReport& r);

}  // namespace ustatlab

#endif
