#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "ustatlab/normal.hpp"
#include "ustatlab/stein.hpp"

using namespace ustatlab;

namespace {

// k = 2 kernel with a genuine first-order projection: f(x1,x2;y) = x1+x2+y
// on Rademacher vertex atoms and Bernoulli edge atoms.
Kernel x_dependent_kernel(double p) {
    Eigen::VectorXd xa(2), xp(2), ya(2), yp(2);
    xa << -1.0, 1.0;
    xp << 0.5, 0.5;
    ya << 1.0, 0.0;
    yp << p, 1.0 - p;
    JointIndexer idx(2, 2, 2);
    Eigen::VectorXd table(idx.size());
    std::vector<int> digits(3, 0);
    std::int64_t i = 0;
    do {
        table[i++] = xa[digits[0]] + xa[digits[1]] + ya[digits[2]];
    } while (idx.next(digits));
    return make_kernel(2, DiscreteSpace(xa, xp), DiscreteSpace(ya, yp), std::move(table));
}

Kernel two_block_edge_kernel() {
    Eigen::MatrixXd v(2, 2);
    v << 0.8, 0.2, 0.2, 0.8;
    return make_subgraph_kernel(make_edge_motif(), StepGraphon(v), CountMode::Injective);
}

}  // namespace

TEST_CASE("pair coefficients") {
    // triangle support pair at n = 5, k = 3
    auto tri = coefficients({}, {{0, 1}, {0, 2}, {1, 2}}, 5, 3);
    CHECK(tri.mu == doctest::Approx(1.0 / 18.0).epsilon(1e-14));
    CHECK(tri.nu == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    // single edge at n = k = 2
    auto edge = coefficients({}, {{0, 1}}, 2, 2);
    CHECK(edge.mu == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(edge.nu == doctest::Approx(0.5).epsilon(1e-14));

    // nu / mu = |B|
    auto star = coefficients({}, {{0, 1}, {0, 2}}, 6, 3);
    CHECK(star.nu / star.mu == doctest::Approx(2.0).epsilon(1e-14));

    CHECK_THROWS_AS(coefficients({0}, {}, 4, 2), ArgumentError);
}

TEST_CASE("vertex-swap linearity") {
    Decomposition rad = hoeffding_decompose(make_rademacher_kernel());
    SteinPairReport r1 = check_linearity_x_swap(rad, 5);
    CHECK(r1.lambda == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(r1.linearity_residual <= 1e-12);
    CHECK(r1.r_term == 0.0);
    // k = 1: the first level carries all the variance
    CHECK(r1.d_delta_mean == doctest::Approx(1.0).epsilon(1e-12));

    Decomposition dep = hoeffding_decompose(x_dependent_kernel(0.4));
    SteinPairReport r2 = check_linearity_x_swap(dep, 6);
    CHECK(r2.linearity_residual <= 1e-10);
    VarianceReport var = variance_closed_form(dep, 6);
    CHECK(r2.d_delta_mean ==
          doctest::Approx(var.per_level.at(1) / var.sigma_n_sq).epsilon(1e-8));

    Kernel constant = make_kernel(1, single_atom_space(), single_atom_space(),
                                  Eigen::VectorXd::Constant(1, 4.0));
    CHECK_THROWS_AS(check_linearity_x_swap(hoeffding_decompose(constant), 4), DegenerateError);

    // Y-only kernels have sigma1 = 0: construction inapplicable
    Decomposition er = hoeffding_decompose(make_er_edge_kernel(0.5));
    CHECK_THROWS_AS(check_linearity_x_swap(er, 4), InapplicableError);
}

TEST_CASE("edge-swap linearity on the edge kernel") {
    Decomposition dec = hoeffding_decompose(make_er_edge_kernel(0.5));
    SteinPairReport r = check_linearity_edge_swap(dec, 4);
    CHECK(r.lambda == doctest::Approx(2.0 / 12.0).epsilon(1e-15));
    CHECK(r.linearity_residual <= 1e-10);
    // k = d = 2: W is the whole centered statistic
    CHECK(r.d_delta_mean == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("edge-swap linearity on the triangle kernel") {
    Kernel tri = make_subgraph_kernel(make_triangle_motif(), StepGraphon::constant(0.5),
                                      CountMode::Injective);
    Decomposition dec = hoeffding_decompose(tri);
    SteinPairReport r = check_linearity_edge_swap(dec, 5);
    CHECK(r.linearity_residual <= 1e-10);
    VarianceReport var = variance_closed_form(dec, 5);
    CHECK(r.d_delta_mean ==
          doctest::Approx(var.per_level.at(2) / var.sigma_n_sq).epsilon(1e-8));
}

TEST_CASE("edge-swap construction errors") {
    // principal degree 1: wrong construction
    Decomposition rad = hoeffding_decompose(make_rademacher_kernel());
    CHECK_THROWS_AS(check_linearity_edge_swap(rad, 5), ArgumentError);

    // balanced two-block graphon: sigma1 vanishes and the two-isolated-vertex
    // projection survives, so the principal graphs are disconnected
    Decomposition blocks = hoeffding_decompose(two_block_edge_kernel());
    KernelSummary summary = summarize(blocks);
    CHECK(summary.sigma1 <= summary.zero_tol);
    CHECK(summary.d == 2);
    CHECK_FALSE(summary.all_connected);
    CHECK_THROWS_AS(check_linearity_edge_swap(blocks, 4), NonnormalRegimeError);
}

TEST_CASE("edge-swap D is antisymmetric") {
    Kernel tri = make_subgraph_kernel(make_triangle_motif(), StepGraphon::constant(0.5),
                                      CountMode::Injective);
    Decomposition dec = hoeffding_decompose(tri);
    StepGraphon g = StepGraphon::constant(0.5);
    YDiscretization disc = discretize_edge_variable(g);
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        LatentSample latents = sample_latents(g, disc, 5, 77, rep);
        Configuration c = configuration_from_latents(latents);
        int i = static_cast<int>(rep % 4);
        int j = i + 1;
        int current = c.y(i, j);
        int replacement = 1 - current;
        double d_fwd = edge_swap_d_value(dec, 5, c, i, j, replacement);
        Configuration swapped = c;
        swapped.y(i, j) = replacement;
        swapped.y(j, i) = replacement;
        double d_bwd = edge_swap_d_value(dec, 5, swapped, i, j, current);
        CHECK(d_fwd == -d_bwd);  // exact, including signed zero collapse
    }
}

TEST_CASE("explicit first-order bound") {
    Decomposition rad = hoeffding_decompose(make_rademacher_kernel());
    KernelSummary summary = summarize(rad);
    CHECK(be_bound_theorem21(summary, 1, 144) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(be_bound_theorem21(summary, 1, 14400) == doctest::Approx(0.1).epsilon(1e-13));
    // exponent -1/2 exactly
    double r = be_bound_theorem21(summary, 1, 400) / be_bound_theorem21(summary, 1, 100);
    CHECK(r == doctest::Approx(0.5).epsilon(1e-13));

    Decomposition er = hoeffding_decompose(make_er_edge_kernel(0.5));
    CHECK_THROWS_AS(be_bound_theorem21(summarize(er), 2, 100), InapplicableError);
}

TEST_CASE("stein equation solution") {
    CHECK(stein_solution(0.0, 0.0) ==
          doctest::Approx(std::sqrt(2.0 * M_PI) / 4.0).epsilon(1e-13));

    // reflection symmetry f_z(w) = f_{-z}(-w)
    for (double z : {-3.0, -0.7, 0.0, 1.2, 4.0}) {
        for (double w : {-4.0, -1.0, 0.0, 0.5, 2.5}) {
            CHECK(stein_solution(z, w) == doctest::Approx(stein_solution(-z, -w)).epsilon(1e-12));
        }
    }

    // continuity across w = z
    for (double z : {-2.0, 0.0, 1.5}) {
        double lo = stein_solution(z, z - 1e-9);
        double hi = stein_solution(z, z + 1e-9);
        CHECK(std::abs(lo - hi) < 1e-8);
    }

    // bounds on the grid
    for (double z = -8.0; z <= 8.0; z += 0.121) {
        for (double w = -8.0; w <= 8.0; w += 0.13) {
            double f = stein_solution(z, w);
            CHECK(std::abs(f) <= 1.0);
            CHECK(std::abs(w * f) <= 1.0);
        }
    }
}

TEST_CASE("stein equation residual at random points") {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        double z = 12.0 * rng::uniform(3, 0, i) - 6.0;
        double w = 12.0 * rng::uniform(3, 1, i) - 6.0;
        if (w == z) continue;
        double lhs = stein_solution_derivative(z, w) - w * stein_solution(z, w);
        double rhs = (w <= z ? 1.0 : 0.0) - normal_cdf(z);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (double z = -8.0; z <= 8.0; z += 0.37) {
        CHECK(std::abs(normal_cdf(z) + normal_cdf(-z) - 1.0) <= 1e-14);
    }
    CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-9));
    CHECK(normal_cdf(10.0) <= 1.0);
    CHECK(normal_cdf(-40.0) >= 0.0);
}

TEST_CASE("scaled complementary error function") {
    // cross-check the asymptotic branch against the direct branch
    double direct = std::exp(11.9 * 11.9) * std::erfc(11.9);
    CHECK(erfcx(11.9) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(erfcx(12.5) < erfcx(11.9));
    CHECK(erfcx(0.0) == doctest::Approx(1.0));
    CHECK(erfcx(-1.0) == doctest::Approx(2.0 * std::exp(1.0) - erfcx(1.0)).epsilon(1e-13));
}
