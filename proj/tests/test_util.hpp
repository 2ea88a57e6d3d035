#ifndef USTATLAB_TESTS_TEST_UTIL_HPP
#define USTATLAB_TESTS_TEST_UTIL_HPP

#include <vector>

#include "ustatlab/hoeffding.hpp"
#include "ustatlab/kernel.hpp"
#include "ustatlab/rng.hpp"

namespace ustatlab::testutil {

inline DiscreteSpace random_space(int atoms, std::uint64_t key, std::uint64_t stream) {
    Eigen::VectorXd values(atoms), probs(atoms);
    double total = 0.0;
    for (int a = 0; a < atoms; ++a) {
        values[a] = 2.0 * rng::uniform(key, stream, static_cast<std::uint64_t>(a)) - 1.0;
        probs[a] = 0.1 + rng::uniform(key, stream + 100, static_cast<std::uint64_t>(a));
        total += probs[a];
    }
    probs /= total;
    // renormalize exactly enough for the 1e-12 validation
    probs[atoms - 1] += 1.0 - probs.sum();
    return DiscreteSpace(std::move(values), std::move(probs));
}

/// Random symmetric kernel with values in [-1, 1] before symmetrization.
inline Kernel random_symmetric_kernel(int k, int nx, int ny, std::uint64_t seed) {
    std::uint64_t key = rng::key(seed, 977, 0);
    DiscreteSpace xs = random_space(nx, key, 1);
    DiscreteSpace ys = random_space(ny, key, 2);
    JointIndexer idx(k, nx, ny);
    Eigen::VectorXd table(idx.size());
    for (std::int64_t i = 0; i < idx.size(); ++i) {
        table[i] = 2.0 * rng::uniform(key, 3, static_cast<std::uint64_t>(i)) - 1.0;
    }
    return symmetrize(make_kernel(k, std::move(xs), std::move(ys), std::move(table)));
}

/// Independent conditional-expectation oracle: E{f_{A,B} | fixed sub-coords},
/// computed directly from the component table by probability-weighted
/// summation over the free coordinates.
inline double conditional_expectation(const Kernel& kernel, const HoeffdingComponent& comp,
                                      const std::vector<int>& fixed_positions,
                                      const std::vector<int>& fixed_values) {
    int total = static_cast<int>(comp.a.size() + comp.b.size());
    SubIndexer si(static_cast<int>(comp.a.size()), static_cast<int>(comp.b.size()),
                  kernel.x_space.size(), kernel.y_space.size());
    std::vector<int> digits(static_cast<std::size_t>(total), 0);
    std::vector<char> is_fixed(static_cast<std::size_t>(total), 0);
    for (std::size_t i = 0; i < fixed_positions.size(); ++i) {
        digits[static_cast<std::size_t>(fixed_positions[i])] = fixed_values[i];
        is_fixed[static_cast<std::size_t>(fixed_positions[i])] = 1;
    }
    double acc = 0.0;
    while (true) {
        double w = 1.0;
        for (int pos = 0; pos < total; ++pos) {
            if (is_fixed[static_cast<std::size_t>(pos)]) continue;
            const auto& space = pos < static_cast<int>(comp.a.size()) ? kernel.x_space : kernel.y_space;
            w *= space.probs[digits[static_cast<std::size_t>(pos)]];
        }
        acc += w * comp.table[si.encode(digits)];
        int pos = total - 1;
        while (pos >= 0) {
            if (is_fixed[static_cast<std::size_t>(pos)]) {
                --pos;
                continue;
            }
            if (++digits[static_cast<std::size_t>(pos)] < si.radix(pos)) break;
            digits[static_cast<std::size_t>(pos--)] = 0;
        }
        if (pos < 0) break;
    }
    return acc;
}

}  // namespace ustatlab::testutil

#endif
