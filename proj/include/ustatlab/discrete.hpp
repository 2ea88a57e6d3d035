#ifndef USTATLAB_DISCRETE_HPP
#define USTATLAB_DISCRETE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ustatlab/common.hpp"

namespace ustatlab {

/// Finite probability space: atom values plus matching probabilities.
struct DiscreteSpace {
    Eigen::VectorXd atoms;
    Eigen::VectorXd probs;

    DiscreteSpace() = default;
    DiscreteSpace(Eigen::VectorXd a, Eigen::VectorXd p) : atoms(std::move(a)), probs(std::move(p)) {
        validate();
    }

    int size() const { return static_cast<int>(atoms.size()); }

    void validate() const {
        if (atoms.size() < 1) throw ValidationError("discrete space needs at least one atom");
        if (atoms.size() != probs.size()) throw ValidationError("atom/probability length mismatch");
        double total = 0.0;
        for (Eigen::Index i = 0; i < probs.size(); ++i) {
            if (probs[i] < 0.0) throw ValidationError("negative probability");
            total += probs[i];
        }
        if (std::abs(total - 1.0) > 1e-12) throw ValidationError("probabilities do not sum to 1");
    }
};

inline DiscreteSpace single_atom_space(double value = 0.0) {
    Eigen::VectorXd a(1), p(1);
    a << value;
    p << 1.0;
    return DiscreteSpace(std::move(a), std::move(p));
}

/// Unordered pairs (i,j), i<j, of [0,k) in lexicographic order. This fixes
/// the y-coordinate order used by every dense table in the library.
inline std::vector<std::pair<int, int>> canonical_pairs(int k) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
    }
    return pairs;
}

inline int pair_rank(int i, int j, int k) {
    if (i > j) std::swap(i, j);
    return i * (2 * k - i - 1) / 2 + (j - i - 1);
}

/// Row-major mixed-radix index over (x_1..x_k, y_12, y_13, ..., y_{k-1,k}):
/// x_1 is the most significant digit, the last y pair varies fastest.
class JointIndexer {
public:
    JointIndexer() = default;
    JointIndexer(int k, int x_radix, int y_radix)
        : k_(k), pair_count_(k * (k - 1) / 2), x_radix_(x_radix), y_radix_(y_radix) {
        if (k < 1) throw ArgumentError("kernel order k must be >= 1");
        double states = std::pow(static_cast<double>(x_radix), k) *
                        std::pow(static_cast<double>(y_radix), pair_count_);
        if (states > 1e8) throw CapabilityError("joint state space above 1e8 entries");
        size_ = 1;
        for (int i = 0; i < k_; ++i) size_ *= x_radix_;
        for (int i = 0; i < pair_count_; ++i) size_ *= y_radix_;
    }

    int k() const { return k_; }
    int pair_count() const { return pair_count_; }
    int x_radix() const { return x_radix_; }
    int y_radix() const { return y_radix_; }
    std::int64_t size() const { return size_; }
    int digit_count() const { return k_ + pair_count_; }

    int radix(int pos) const { return pos < k_ ? x_radix_ : y_radix_; }

    std::int64_t encode(const std::vector<int>& digits) const {
        std::int64_t idx = 0;
        for (int pos = 0; pos < digit_count(); ++pos) idx = idx * radix(pos) + digits[static_cast<std::size_t>(pos)];
        return idx;
    }

    void decode(std::int64_t idx, std::vector<int>& digits) const {
        digits.resize(static_cast<std::size_t>(digit_count()));
        for (int pos = digit_count() - 1; pos >= 0; --pos) {
            int r = radix(pos);
            digits[static_cast<std::size_t>(pos)] = static_cast<int>(idx % r);
            idx /= r;
        }
    }

    /// First digit not yet at its maximum is advanced odometer-style;
    /// returns false once all assignments have been visited.
    bool next(std::vector<int>& digits) const {
        for (int pos = digit_count() - 1; pos >= 0; --pos) {
            auto& d = digits[static_cast<std::size_t>(pos)];
            if (++d < radix(pos)) return true;
            d = 0;
        }
        return false;
    }

private:
    int k_ = 0;
    int pair_count_ = 0;
    int x_radix_ = 1;
    int y_radix_ = 1;
    std::int64_t size_ = 0;
};

/// Mixed-radix indexer over an arbitrary subset of coordinates (used for
/// projection tables). Positions 0..|A|-1 are x coordinates, the rest y.
class SubIndexer {
public:
    SubIndexer() = default;
    SubIndexer(int x_coords, int y_coords, int x_radix, int y_radix)
        : x_coords_(x_coords), y_coords_(y_coords), x_radix_(x_radix), y_radix_(y_radix) {
        size_ = 1;
        for (int i = 0; i < x_coords_; ++i) size_ *= x_radix_;
        for (int i = 0; i < y_coords_; ++i) size_ *= y_radix_;
    }

    std::int64_t size() const { return size_; }
    int digit_count() const { return x_coords_ + y_coords_; }
    int radix(int pos) const { return pos < x_coords_ ? x_radix_ : y_radix_; }

    std::int64_t encode(const std::vector<int>& digits) const {
        std::int64_t idx = 0;
        for (int pos = 0; pos < digit_count(); ++pos) idx = idx * radix(pos) + digits[static_cast<std::size_t>(pos)];
        return idx;
    }

    void decode(std::int64_t idx, std::vector<int>& digits) const {
        digits.resize(static_cast<std::size_t>(digit_count()));
        for (int pos = digit_count() - 1; pos >= 0; --pos) {
            int r = radix(pos);
            digits[static_cast<std::size_t>(pos)] = static_cast<int>(idx % r);
            idx /= r;
        }
    }

private:
    int x_coords_ = 0;
    int y_coords_ = 0;
    int x_radix_ = 1;
    int y_radix_ = 1;
    std::int64_t size_ = 1;
};

}  // namespace ustatlab

#endif
