#include "ustatlab/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ustatlab/normal.hpp"
#include "ustatlab/rng.hpp"

namespace ustatlab {

Standardization parse_standardization(const std::string& text) {
    if (text == "exact") return Standardization::Exact;
    if (text == "plugin") return Standardization::Plugin;
    throw ParseError("standardization must be exact or plugin, got '" + text + "'");
}

std::string to_string(Standardization s) {
    return s == Standardization::Exact ? "exact" : "plugin";
}

Kernel ExperimentSpec::statistic_kernel() const {
    if (kernel.has_value()) return *kernel;
    if (!motif.has_value()) throw ArgumentError("experiment needs a motif or a kernel");
    return make_subgraph_kernel(*motif, graphon, mode);
}

void ExperimentSpec::validate() const {
    if (!motif.has_value() && !kernel.has_value()) {
        throw ArgumentError("experiment needs a motif or a kernel");
    }
    if (replicates < 1000) throw ArgumentError("experiment needs at least 1000 replicates");
    if (n_grid.empty()) throw ArgumentError("empty n grid");
    int k = kernel.has_value() ? kernel->k : motif->vertex_count;
    int prev = 0;
    for (int n : n_grid) {
        if (n < k) throw ArgumentError("grid point below kernel order k");
        if (n <= prev) throw ArgumentError("n grid must be strictly increasing");
        prev = n;
    }
}

std::string ExperimentSpec::canonical_description() const {
    std::ostringstream os;
    os.precision(17);
    if (kernel.has_value()) {
        os << "kernel " << format_kernel_json(*kernel);
    } else {
        os << "motif " << format_motif(*motif) << " mode " << to_string(mode) << " graphon "
           << format_graphon_json(graphon);
    }
    os << "n_grid";
    for (int n : n_grid) os << " " << n;
    os << " replicates " << replicates << " seed " << seed << " standardization "
       << to_string(standardization);
    return os.str();
}

namespace {

// Raw statistic for one replicate of a subgraph-count experiment, sampled
// straight into packed adjacency; bit-identical to counting on the
// corresponding GraphSample.
std::int64_t count_replicate(const Motif& f, CountMode mode, const StepGraphon& g, int n,
                             std::uint64_t seed, std::uint64_t replicate) {
    std::uint64_t key = rng::key(seed, static_cast<std::uint64_t>(n), replicate);
    int b = g.blocks();
    thread_local std::vector<int> blocks;
    blocks.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double u = rng::uniform(key, rng::kStreamLatent, static_cast<std::uint64_t>(i));
        int block = static_cast<int>(u * b);
        blocks[static_cast<std::size_t>(i)] = block >= b ? b - 1 : block;
    }
    BitAdjacency adj;
    adj.init(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double u = rng::uniform(key, rng::kStreamEdge, static_cast<std::uint64_t>(pair_rank(i, j, n)));
            if (u <= g(blocks[static_cast<std::size_t>(i)], blocks[static_cast<std::size_t>(j)])) {
                adj.set_edge(i, j);
            }
        }
    }
    return count_subgraphs(adj, f, mode);
}

double kernel_replicate(const Kernel& f, int n, std::uint64_t seed, std::uint64_t replicate) {
    std::uint64_t key = rng::key(seed, static_cast<std::uint64_t>(n), replicate);
    Configuration c;
    c.n = n;
    c.x = Eigen::VectorXi::Zero(n);
    c.y = Eigen::MatrixXi::Constant(n, n, -1);
    auto draw = [](const DiscreteSpace& space, double u) {
        double cum = 0.0;
        for (int a = 0; a < space.size(); ++a) {
            cum += space.probs[a];
            if (u <= cum) return a;
        }
        return space.size() - 1;
    };
    for (int i = 0; i < n; ++i) {
        c.x[i] = draw(f.x_space, rng::uniform(key, rng::kStreamLatent, static_cast<std::uint64_t>(i)));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int atom = draw(f.y_space, rng::uniform(key, rng::kStreamEdge,
                                                    static_cast<std::uint64_t>(pair_rank(i, j, n))));
            c.y(i, j) = atom;
            c.y(j, i) = atom;
        }
    }
    return evaluate_ustat(f, c);
}

}  // namespace

std::vector<double> simulate_n(const ExperimentSpec& spec, const Decomposition& dec, int n) {
    int m = spec.replicates;
    std::vector<double> values(static_cast<std::size_t>(m));
    bool motif_path = !spec.kernel.has_value();
    parallel_for(m, spec.threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t r = lo; r < hi; ++r) {
            double v;
            if (motif_path) {
                v = static_cast<double>(count_replicate(*spec.motif, spec.mode, spec.graphon, n,
                                                        spec.seed, static_cast<std::uint64_t>(r)));
            } else {
                v = kernel_replicate(*spec.kernel, n, spec.seed, static_cast<std::uint64_t>(r));
            }
            values[static_cast<std::size_t>(r)] = v;
        }
    });

    double mean, sd;
    if (spec.standardization == Standardization::Exact) {
        mean = exact_mean(dec, n);
        double variance = variance_closed_form(dec, n).sigma_n_sq;
        if (variance <= 0.0) throw DegenerateError("statistic has zero variance");
        sd = std::sqrt(variance);
    } else {
        mean = pairwise_sum(values) / m;
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            double d = values[i] - mean;
            sq[i] = d * d;
        }
        double variance = pairwise_sum(sq) / (m - 1);
        if (variance <= 0.0) throw DegenerateError("statistic has zero empirical variance");
        sd = std::sqrt(variance);
    }
    for (double& v : values) v = (v - mean) / sd;
    return values;
}

std::vector<std::vector<double>> simulate(const ExperimentSpec& spec) {
    spec.validate();
    Decomposition dec = hoeffding_decompose(spec.statistic_kernel());
    summarize(dec);  // rejects constant kernels up front
    std::vector<std::vector<double>> out;
    out.reserve(spec.n_grid.size());
    for (int n : spec.n_grid) out.push_back(simulate_n(spec, dec, n));
    return out;
}

double ks_statistic(const std::vector<double>& sorted_samples) {
    if (sorted_samples.empty()) throw ArgumentError("ks_statistic needs a nonempty sample");
    double m = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        double phi = normal_cdf(sorted_samples[i]);
        double upper = (static_cast<double>(i) + 1.0) / m - phi;
        double lower = phi - static_cast<double>(i) / m;
        d = std::max(d, std::max(upper, lower));
    }
    return d;
}

FitResult fit_rate(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw ArgumentError("fit_rate needs at least 2 points");
    Eigen::MatrixXd design(points.size(), 2);
    Eigen::VectorXd target(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto [n, ks] = points[i];
        if (!(ks > 0.0)) throw DegenerateError("fit_rate needs strictly positive distances");
        design(static_cast<Eigen::Index>(i), 0) = 1.0;
        design(static_cast<Eigen::Index>(i), 1) = std::log(n);
        target[static_cast<Eigen::Index>(i)] = std::log(ks);
    }
    Eigen::Vector2d beta = (design.transpose() * design).ldlt().solve(design.transpose() * target);
    Eigen::VectorXd residual = target - design * beta;
    double ss_res = residual.squaredNorm();
    double ss_tot = (target.array() - target.mean()).matrix().squaredNorm();
    FitResult fit;
    fit.intercept = beta[0];
    fit.slope = beta[1];
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

std::string to_string(InducedCase c) {
    switch (c) {
        case InducedCase::G1: return "G1";
        case InducedCase::G2: return "G2";
        case InducedCase::G3: return "G3";
        default: return "NONNORMAL";
    }
}

InducedCase classify_induced(const Motif& f, const Rational& p) {
    if (!(p.num > 0 && p.num < p.den)) throw ArgumentError("classification needs p in (0,1)");
    MotifStats st = motif_stats(f);
    long long v = f.vertex_count;
    long long pairs = v * (v - 1) / 2;
    long long triples = v * (v - 1) * (v - 2) / 6;
    // (G1) e != p C(v,2)
    if (static_cast<u128>(st.edge_count) * static_cast<u128>(p.den) !=
        static_cast<u128>(p.num) * static_cast<u128>(pairs)) {
        return InducedCase::G1;
    }
    // (G2) s != 3 p^2 C(v,3)
    u128 den2 = static_cast<u128>(p.den) * static_cast<u128>(p.den);
    u128 num2 = static_cast<u128>(p.num) * static_cast<u128>(p.num);
    if (static_cast<u128>(st.two_star_count) * den2 != 3 * num2 * static_cast<u128>(triples)) {
        return InducedCase::G2;
    }
    // (G3) t != p^3 C(v,3)
    u128 den3 = den2 * static_cast<u128>(p.den);
    u128 num3 = num2 * static_cast<u128>(p.num);
    if (static_cast<u128>(st.triangle_count) * den3 != num3 * static_cast<u128>(triples)) {
        return InducedCase::G3;
    }
    return InducedCase::Nonnormal;
}

std::string to_string(PredictedRate r) {
    switch (r) {
        case PredictedRate::MinusOne: return "-1";
        case PredictedRate::MinusHalf: return "-0.5";
        default: return "nonnormal";
    }
}

PredictedRate predict_rate(const KernelSummary& summary) {
    if (summary.sigma1 > summary.zero_tol) return PredictedRate::MinusHalf;
    if (!summary.all_connected) return PredictedRate::Nonnormal;
    if (summary.y_only && summary.all_strongly_connected) return PredictedRate::MinusOne;
    return PredictedRate::MinusHalf;
}

std::uint64_t config_hash(const std::string& canonical_description) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : canonical_description) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

RateReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    Decomposition dec = hoeffding_decompose(spec.statistic_kernel());
    KernelSummary summary = summarize(dec);

    RateReport report;
    report.predicted_rate = predict_rate(summary);
    report.standardization = to_string(spec.standardization);
    report.noise_floor = 1.3581 / std::sqrt(static_cast<double>(spec.replicates));
    report.config_hash = config_hash(spec.canonical_description());
    report.seed = spec.seed;

    for (int n : spec.n_grid) {
        std::vector<double> samples = simulate_n(spec, dec, n);
        std::sort(samples.begin(), samples.end());
        RatePoint pt;
        pt.n = n;
        pt.ks = ks_statistic(samples);
        pt.std_error = report.noise_floor;
        pt.excluded = pt.ks < 3.0 * report.noise_floor;
        report.points.push_back(pt);
    }

    if (report.predicted_rate == PredictedRate::Nonnormal) {
        // no normal limit: the Kolmogorov distances are not expected to decay,
        // so fitting a normal-approximation rate would be meaningless
        report.verdict = "nonnormal-regime";
        return report;
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : report.points) {
        if (!p.excluded) pts.emplace_back(static_cast<double>(p.n), p.ks);
    }
    if (pts.size() < 2) {
        report.verdict = "noise-limited";
        return report;
    }
    FitResult fit = fit_rate(pts);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.r_squared = fit.r_squared;
    double target = report.predicted_rate == PredictedRate::MinusOne ? -1.0 : -0.5;
    double window = report.predicted_rate == PredictedRate::MinusOne ? 0.25 : 0.2;
    report.verdict = std::abs(fit.slope - target) <= window ? "consistent" : "inconsistent";
    return report;
}

namespace {

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << v;
    return os.str();
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string format_rate_csv(const RateReport& r) {
    std::ostringstream os;
    os << "# config " << hex64(r.config_hash) << " seed " << r.seed << "\n";
    os << "n,ks,stderr\n";
    for (const auto& p : r.points) {
        os << p.n << "," << format_double(p.ks) << "," << format_double(p.std_error) << "\n";
    }
    return os.str();
}

std::string format_rate_summary_json(const RateReport& r) {
    nlohmann::json j;
    j["slope"] = r.slope;
    j["intercept"] = r.intercept;
    j["r_squared"] = r.r_squared;
    j["predicted_rate"] = to_string(r.predicted_rate);
    j["verdict"] = r.verdict;
    j["standardization"] = r.standardization;
    j["noise_floor"] = r.noise_floor;
    j["config"] = hex64(r.config_hash);
    j["seed"] = r.seed;
    std::vector<int> excluded;
    for (const auto& p : r.points) {
        if (p.excluded) excluded.push_back(p.n);
    }
    j["excluded_points"] = excluded;
    return j.dump(2) + "\n";
}

}  // namespace ustatlab
