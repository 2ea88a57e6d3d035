#ifndef USTATLAB_MC_HPP
#define USTATLAB_MC_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ustatlab/graphon.hpp"
#include "ustatlab/hoeffding.hpp"
#include "ustatlab/kernel.hpp"
#include "ustatlab/motif.hpp"
#include "ustatlab/ustat.hpp"

namespace ustatlab {

enum class Standardization { Exact, Plugin };

Standardization parse_standardization(const std::string& text);
std::string to_string(Standardization s);

/// Monte Carlo experiment: either a subgraph-count statistic (motif + mode +
/// graphon) or a generic kernel statistic sampled from its own alphabets.
struct ExperimentSpec {
    std::optional<Motif> motif;
    CountMode mode = CountMode::Injective;
    StepGraphon graphon = StepGraphon::constant(0.5);
    std::optional<Kernel> kernel;
    std::vector<int> n_grid;
    int replicates = 0;
    std::uint64_t seed = 0;
    Standardization standardization = Standardization::Exact;
    int threads = 1;

    Kernel statistic_kernel() const;
    void validate() const;
    std::string canonical_description() const;
};

/// Standardized samples for one grid point, in replicate order; identical
/// for every thread count (each replicate is keyed by its index).
std::vector<double> simulate_n(const ExperimentSpec& spec, const Decomposition& dec, int n);

/// All grid points; spec.validate() applies (m >= 1000).
std::vector<std::vector<double>> simulate(const ExperimentSpec& spec);

/// One-sample Kolmogorov statistic against N(0,1); input must be sorted.
double ks_statistic(const std::vector<double>& sorted_samples);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// OLS on (log n, log ks). Throws DegenerateError if any ks is zero.
FitResult fit_rate(const std::vector<std::pair<double, double>>& points);

enum class InducedCase { G1, G2, G3, Nonnormal };

std::string to_string(InducedCase c);

/// Exact rational case split for induced counts at constant p:
/// G1: e != p C(v,2); G2: 2-star mismatch; G3: triangle mismatch;
/// all equal -> Nonnormal (no normal-approximation theorem applies).
InducedCase classify_induced(const Motif& f, const Rational& p);

enum class PredictedRate { MinusHalf, MinusOne, Nonnormal };

std::string to_string(PredictedRate r);

/// Theorem-implied Kolmogorov rate from the decomposition: sigma1 > 0 gives
/// n^{-1/2}; otherwise strongly connected principal graphs of a Y-only
/// kernel give n^{-1}, connected ones n^{-1/2}, anything else no normal
/// limit.
PredictedRate predict_rate(const KernelSummary& summary);

struct RatePoint {
    int n = 0;
    double ks = 0.0;
    double std_error = 0.0;
    bool excluded = false;  // within 3 noise floors of zero, left out of fit
};

struct RateReport {
    std::vector<RatePoint> points;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    PredictedRate predicted_rate = PredictedRate::MinusHalf;
    double noise_floor = 0.0;
    std::string standardization;
    std::string verdict;  // consistent | inconsistent | nonnormal-regime | noise-limited
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

RateReport run_experiment(const ExperimentSpec& spec);

std::string format_rate_csv(const RateReport& r);
std::string format_rate_summary_json(const RateReport& r);

std::uint64_t config_hash(const std::string& canonical_description);

}  // namespace ustatlab

#endif
