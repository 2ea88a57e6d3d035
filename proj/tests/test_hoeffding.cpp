#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "ustatlab/hoeffding.hpp"

using namespace ustatlab;

namespace {

// Exhaustive orthogonality check: every proper sub-pair conditioning of every
// component integrates to zero at every conditioning atom.
double max_orthogonality_residual(const Decomposition& dec) {
    double worst = 0.0;
    for (const auto& comp : dec.components) {
        if (comp.is_mean()) continue;
        int total = static_cast<int>(comp.a.size() + comp.b.size());
        SubIndexer si(static_cast<int>(comp.a.size()), static_cast<int>(comp.b.size()),
                      dec.kernel.x_space.size(), dec.kernel.y_space.size());
        for (std::uint32_t keep = 0; keep < (1u << total); ++keep) {
            if (keep == (1u << total) - 1) continue;  // the improper sub-pair (A,B) itself
            std::vector<int> positions;
            for (int pos = 0; pos < total; ++pos) {
                if (keep & (1u << pos)) positions.push_back(pos);
            }
            // every assignment of the kept coordinates
            std::vector<int> values(positions.size(), 0);
            while (true) {
                double residual = std::abs(
                    testutil::conditional_expectation(dec.kernel, comp, positions, values));
                worst = std::max(worst, residual);
                int i = static_cast<int>(values.size()) - 1;
                while (i >= 0 && ++values[static_cast<std::size_t>(i)] ==
                                     si.radix(positions[static_cast<std::size_t>(i)])) {
                    values[static_cast<std::size_t>(i--)] = 0;
                }
                if (i < 0) break;
            }
        }
    }
    return worst;
}

double max_reconstruction_residual(const Decomposition& dec) {
    JointIndexer idx = dec.kernel.indexer();
    double worst = 0.0;
    std::vector<int> digits(static_cast<std::size_t>(idx.digit_count()), 0);
    std::int64_t i = 0;
    do {
        double total = 0.0;
        for (const auto& comp : dec.components) total += dec.component_value(comp, digits);
        worst = std::max(worst, std::abs(total - dec.kernel.table[i++]));
    } while (idx.next(digits));
    return worst;
}

double pairwise_l2_inner(const Decomposition& dec, const HoeffdingComponent& c1,
                         const HoeffdingComponent& c2) {
    JointIndexer idx = dec.kernel.indexer();
    std::vector<int> digits(static_cast<std::size_t>(idx.digit_count()), 0);
    double acc = 0.0;
    do {
        acc += dec.kernel.weight(digits) * dec.component_value(c1, digits) *
               dec.component_value(c2, digits);
    } while (idx.next(digits));
    return acc;
}

}  // namespace

TEST_CASE("constant kernel decomposes to its mean") {
    Kernel constant = make_kernel(2, single_atom_space(), make_er_edge_kernel(0.5).y_space,
                                  Eigen::VectorXd::Constant(2, 3.25));
    Decomposition dec = hoeffding_decompose(constant);
    CHECK(dec.mean_component().table[0] == doctest::Approx(3.25).epsilon(1e-15));
    for (const auto& comp : dec.components) {
        if (comp.is_mean()) continue;
        CHECK(comp.sigma < 1e-14);
    }
    CHECK_THROWS_AS(summarize(dec), DegenerateError);
}

TEST_CASE("edge-indicator kernel projections") {
    double p = 0.5;
    Decomposition dec = hoeffding_decompose(make_er_edge_kernel(p));
    CHECK(dec.mean_component().table[0] == doctest::Approx(p).epsilon(1e-15));
    const HoeffdingComponent* proj = dec.find({}, {{0, 1}});
    REQUIRE(proj != nullptr);
    CHECK(proj->table[0] == doctest::Approx(1.0 - p).epsilon(1e-13));  // y = 1 atom
    CHECK(proj->table[1] == doctest::Approx(-p).epsilon(1e-13));       // y = 0 atom
    CHECK(proj->sigma == doctest::Approx(std::sqrt(p * (1.0 - p))).epsilon(1e-13));
    CHECK(proj->v == 2);

    KernelSummary summary = summarize(dec);
    CHECK(summary.d == 2);
    CHECK(summary.sigma1 <= summary.zero_tol);
    CHECK(summary.tau == doctest::Approx(std::pow(p, 0.25)).epsilon(1e-13));
    CHECK(summary.principal.size() == 1);
    CHECK(summary.all_connected);
    CHECK(summary.all_strongly_connected);
    CHECK(summary.y_only);
}

TEST_CASE("triangle-indicator kernel matches the explicit projection") {
    double p = 0.5;
    Kernel tri = make_subgraph_kernel(make_triangle_motif(), StepGraphon::constant(p),
                                      CountMode::Injective);
    Decomposition dec = hoeffding_decompose(tri);
    const HoeffdingComponent* proj = dec.find({}, {{0, 1}});
    REQUIRE(proj != nullptr);
    // p^2 (y - p) at y in {1, 0}
    CHECK(proj->table[0] == doctest::Approx(p * p * (1.0 - p)).epsilon(1e-12));
    CHECK(proj->table[1] == doctest::Approx(-p * p * p).epsilon(1e-12));

    KernelSummary summary = summarize(dec);
    CHECK(summary.d == 2);
    CHECK(summary.principal.size() == 3);  // the three single-edge pairs
    CHECK(summary.all_connected);
    CHECK(summary.all_strongly_connected);

    // symmetry transport: isomorphic pairs carry the same norm
    double sigma = dec.find({}, {{0, 1}})->sigma;
    CHECK(dec.find({}, {{0, 2}})->sigma == doctest::Approx(sigma).epsilon(1e-13));
    CHECK(dec.find({}, {{1, 2}})->sigma == doctest::Approx(sigma).epsilon(1e-13));
}

TEST_CASE("rademacher summary") {
    Decomposition dec = hoeffding_decompose(make_rademacher_kernel());
    KernelSummary summary = summarize(dec);
    CHECK(summary.d == 1);
    CHECK(summary.sigma1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(summary.tau == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("level kernels") {
    double p = 0.5;
    Kernel tri = make_subgraph_kernel(make_triangle_motif(), StepGraphon::constant(p),
                                      CountMode::Injective);
    Decomposition dec = hoeffding_decompose(tri);

    Eigen::VectorXd level0 = dec.level_kernel(0);
    CHECK(level0[0] == doctest::Approx(0.125).epsilon(1e-13));
    CHECK((level0.array() == level0[0]).all());

    // no X dependence: the one-vertex level vanishes identically
    CHECK(dec.level_kernel(1).lpNorm<Eigen::Infinity>() < 1e-14);

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(tri.table.size());
    for (int level = 0; level <= tri.k; ++level) sum += dec.level_kernel(level);
    CHECK((sum - tri.table).lpNorm<Eigen::Infinity>() < 1e-12);

    CHECK_THROWS_AS(dec.level_kernel(-1), ArgumentError);
    CHECK_THROWS_AS(dec.level_kernel(4), ArgumentError);
}

TEST_CASE("orthogonality and reconstruction on random symmetric kernels") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        int k = 2 + static_cast<int>(seed % 2);
        int nx = 2 + static_cast<int>(seed % 2);
        int ny = 2 + static_cast<int>((seed / 2) % 2);
        Kernel f = testutil::random_symmetric_kernel(k, nx, ny, seed);
        Decomposition dec = hoeffding_decompose(f);
        CHECK(max_orthogonality_residual(dec) < 1e-12);
        CHECK(max_reconstruction_residual(dec) < 1e-12);
        ++checked;
    }
    CHECK(checked == 12);
}

TEST_CASE("pairwise L2 orthogonality of distinct components") {
    Kernel f = testutil::random_symmetric_kernel(2, 2, 3, 41);
    Decomposition dec = hoeffding_decompose(f);
    for (std::size_t i = 0; i < dec.components.size(); ++i) {
        for (std::size_t j = i + 1; j < dec.components.size(); ++j) {
            CHECK(std::abs(pairwise_l2_inner(dec, dec.components[i], dec.components[j])) < 1e-12);
        }
    }
}

TEST_CASE("closed-form projections match the decomposition") {
    for (double p : {0.3, 0.5, 0.7}) {
        for (CountMode mode : {CountMode::Injective, CountMode::Induced}) {
            for (const Motif& f : {make_edge_motif(), make_two_star_motif(), make_triangle_motif()}) {
                Kernel kernel = make_subgraph_kernel(f, StepGraphon::constant(p), mode);
                Decomposition dec = hoeffding_decompose(kernel);
                ClosedFormProjections cf = er_closed_form_projections(f, p, mode);

                const HoeffdingComponent* b1 = dec.find({}, {{0, 1}});
                REQUIRE(b1 != nullptr);
                CHECK(std::abs(b1->table[0] - cf.single_edge[0]) < 1e-10);
                CHECK(std::abs(b1->table[1] - cf.single_edge[1]) < 1e-10);

                if (mode == CountMode::Induced && f.vertex_count >= 3) {
                    const HoeffdingComponent* b2 = dec.find({}, {{0, 1}, {0, 2}});
                    REQUIRE(b2 != nullptr);
                    REQUIRE(cf.two_star.has_value());
                    for (int i = 0; i < 4; ++i) CHECK(std::abs(b2->table[i] - (*cf.two_star)[i]) < 1e-10);
                    const HoeffdingComponent* b3 = dec.find({}, {{0, 1}, {0, 2}, {1, 2}});
                    REQUIRE(b3 != nullptr);
                    REQUIRE(cf.triangle.has_value());
                    for (int i = 0; i < 8; ++i) CHECK(std::abs(b3->table[i] - (*cf.triangle)[i]) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("closed-form examples") {
    // single edge at p = 1/2: the projection is y - 1/2
    ClosedFormProjections edge = er_closed_form_projections(make_edge_motif(), 0.5, CountMode::Injective);
    CHECK(edge.single_edge[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(edge.single_edge[1] == doctest::Approx(-0.5).epsilon(1e-14));

    // 2-star at p = 2/3: the induced single-edge projection vanishes
    ClosedFormProjections star = er_closed_form_projections(make_two_star_motif(), 2.0 / 3.0,
                                                            CountMode::Induced);
    CHECK(std::abs(star.single_edge[0]) < 1e-14);
    CHECK(std::abs(star.single_edge[1]) < 1e-14);

    // triangle: p^2 (y - p)
    double p = 0.37;
    ClosedFormProjections tri = er_closed_form_projections(make_triangle_motif(), p, CountMode::Injective);
    CHECK(tri.single_edge[0] == doctest::Approx(p * p * (1.0 - p)).epsilon(1e-13));

    CHECK_THROWS_AS(er_closed_form_projections(make_edge_motif(), 0.0, CountMode::Injective),
                    ArgumentError);
    CHECK_THROWS_AS(er_closed_form_projections(make_edge_motif(), 1.5, CountMode::Injective),
                    ArgumentError);
}

TEST_CASE("non-symmetric kernels are rejected") {
    Kernel star = make_subgraph_kernel(make_two_star_motif(), StepGraphon::constant(0.5),
                                       CountMode::Injective);
    star.table[2] += 0.5;
    CHECK_THROWS_AS(hoeffding_decompose(star), ValidationError);
}
