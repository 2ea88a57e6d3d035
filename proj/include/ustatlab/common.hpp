#ifndef USTATLAB_COMMON_HPP
#define USTATLAB_COMMON_HPP

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ustatlab {

// Error taxonomy. The CLI maps ParseError to exit code 2 and every other
// DomainError subclass to exit code 3.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ArgumentError : DomainError {
    using DomainError::DomainError;
};
struct ValidationError : DomainError {
    using DomainError::DomainError;
};
struct CapabilityError : DomainError {
    using DomainError::DomainError;
};
struct DegenerateError : DomainError {
    using DomainError::DomainError;
};
struct InapplicableError : DomainError {
    using DomainError::DomainError;
};
struct NonnormalRegimeError : DomainError {
    using DomainError::DomainError;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using u128 = unsigned __int128;

// Exact binomial coefficient. Values used here stay far below 2^127
// (n <= ~10^4, k <= 5), so no overflow guard beyond the assert-style check.
inline u128 binomial_u128(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    u128 r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = r * static_cast<u128>(n - k + i) / static_cast<u128>(i);
    }
    return r;
}

inline double binomial(long long n, long long k) {
    return static_cast<double>(binomial_u128(n, k));
}

inline std::uint64_t factorial_u64(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

// Reduced fraction with exact integer comparisons; used where floating-point
// equality would misclassify (e.g. p = 2/3).
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw ArgumentError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Parses "a/b", integers, and plain decimals ("0.25") exactly.
Rational parse_rational(const std::string& text);

// Static partition of [0, count) across workers; deterministic assignment so
// results never depend on scheduling.
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t, std::int64_t)>& body);

// Deterministic pairwise summation (order fixed by the array layout).
double pairwise_sum(const double* data, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

int default_thread_count();

}  // namespace ustatlab

#endif
