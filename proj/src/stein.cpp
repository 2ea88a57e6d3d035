#include "ustatlab/stein.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "ustatlab/normal.hpp"

namespace ustatlab {

namespace {

Motif support_graph_of(const std::vector<int>& a, const std::vector<std::pair<int, int>>& b,
                       std::vector<int>* marked_out) {
    std::set<int> supp(a.begin(), a.end());
    for (const auto& [i, j] : b) {
        supp.insert(i);
        supp.insert(j);
    }
    std::vector<int> support(supp.begin(), supp.end());
    auto relabel = [&](int v) {
        return static_cast<int>(std::lower_bound(support.begin(), support.end(), v) - support.begin());
    };
    std::vector<std::pair<int, int>> edges;
    for (const auto& [i, j] : b) edges.emplace_back(relabel(i), relabel(j));
    if (marked_out != nullptr) {
        marked_out->clear();
        for (int v : a) marked_out->push_back(relabel(v));
    }
    return Motif(static_cast<int>(support.size()), std::move(edges));
}

bool marked_isomorphic(const Motif& g1, const std::vector<int>& m1, const Motif& g2,
                       const std::vector<int>& m2) {
    if (g1.vertex_count != g2.vertex_count || g1.edge_count() != g2.edge_count() ||
        m1.size() != m2.size()) {
        return false;
    }
    int v = g1.vertex_count;
    std::vector<char> mark1(static_cast<std::size_t>(v), 0), mark2(static_cast<std::size_t>(v), 0);
    for (int x : m1) mark1[static_cast<std::size_t>(x)] = 1;
    for (int x : m2) mark2[static_cast<std::size_t>(x)] = 1;
    std::vector<int> perm(static_cast<std::size_t>(v));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int x = 0; x < v && ok; ++x) {
            if (mark1[static_cast<std::size_t>(x)] != mark2[static_cast<std::size_t>(perm[static_cast<std::size_t>(x)])]) ok = false;
        }
        for (const auto& [i, j] : g1.edges) {
            if (!ok) break;
            if (!g2.has_edge(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)])) ok = false;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// One representative per marked-isomorphism class of the principal pairs.
std::vector<const HoeffdingComponent*> principal_class_reps(const Decomposition& dec,
                                                            const KernelSummary& summary) {
    std::vector<const HoeffdingComponent*> reps;
    for (int idx : summary.principal) {
        const auto& c = dec.components[static_cast<std::size_t>(idx)];
        bool seen = false;
        for (const auto* r : reps) {
            if (marked_isomorphic(c.support_graph, c.marked, r->support_graph, r->marked)) {
                seen = true;
                break;
            }
        }
        if (!seen) reps.push_back(&c);
    }
    return reps;
}

// All ordered tuples of `len` distinct vertices from [0, n).
std::vector<std::vector<int>> ordered_tuples(int n, int len) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::function<void()> rec = [&] {
        if (static_cast<int>(cur.size()) == len) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            used[static_cast<std::size_t>(v)] = 1;
            cur.push_back(v);
            rec();
            cur.pop_back();
            used[static_cast<std::size_t>(v)] = 0;
        }
    };
    rec();
    return out;
}

void enumerate_configurations(const Kernel& f, int n,
                              const std::function<void(const Configuration&, double)>& body) {
    int nx = f.x_space.size();
    int ny = f.y_space.size();
    int pair_count = n * (n - 1) / 2;
    if (std::pow(nx, n) * std::pow(ny, pair_count) > 2e6) {
        throw CapabilityError("configuration space too large for exhaustive check");
    }
    auto pairs = canonical_pairs(n);
    Configuration c;
    c.n = n;
    c.x = Eigen::VectorXi::Zero(n);
    c.y = Eigen::MatrixXi::Zero(n, n);
    c.y.diagonal().setConstant(-1);
    std::vector<int> digits(static_cast<std::size_t>(n + pair_count), 0);
    while (true) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            c.x[i] = digits[static_cast<std::size_t>(i)];
            w *= f.x_space.probs[c.x[i]];
        }
        for (int p = 0; p < pair_count; ++p) {
            auto [i, j] = pairs[static_cast<std::size_t>(p)];
            int atom = digits[static_cast<std::size_t>(n + p)];
            c.y(i, j) = atom;
            c.y(j, i) = atom;
            w *= f.y_space.probs[atom];
        }
        body(c, w);
        int pos = n + pair_count - 1;
        while (pos >= 0) {
            int radix = pos < n ? nx : ny;
            if (++digits[static_cast<std::size_t>(pos)] < radix) break;
            digits[static_cast<std::size_t>(pos--)] = 0;
        }
        if (pos < 0) break;
    }
}

// f_{A,B} evaluated at the tuple image alpha(A, B) of a configuration.
double component_at(const Kernel& kernel, const HoeffdingComponent& comp,
                    const std::vector<int>& alpha, const Configuration& c) {
    SubIndexer si(static_cast<int>(comp.a.size()), static_cast<int>(comp.b.size()),
                  kernel.x_space.size(), kernel.y_space.size());
    std::vector<int> digits;
    digits.reserve(comp.a.size() + comp.b.size());
    for (int pos : comp.a) digits.push_back(c.x[alpha[static_cast<std::size_t>(pos)]]);
    for (const auto& [i, j] : comp.b) {
        digits.push_back(c.y(alpha[static_cast<std::size_t>(i)], alpha[static_cast<std::size_t>(j)]));
    }
    return comp.table[si.encode(digits)];
}

// Same with one y coordinate (the image of pair {i,j}) replaced by an atom.
double component_at_swapped(const Kernel& kernel, const HoeffdingComponent& comp,
                            const std::vector<int>& alpha, const Configuration& c, int i, int j,
                            int replacement_atom) {
    SubIndexer si(static_cast<int>(comp.a.size()), static_cast<int>(comp.b.size()),
                  kernel.x_space.size(), kernel.y_space.size());
    std::vector<int> digits;
    digits.reserve(comp.a.size() + comp.b.size());
    for (int pos : comp.a) digits.push_back(c.x[alpha[static_cast<std::size_t>(pos)]]);
    for (const auto& [p, q] : comp.b) {
        int u = alpha[static_cast<std::size_t>(p)];
        int v = alpha[static_cast<std::size_t>(q)];
        bool hit = (u == i && v == j) || (u == j && v == i);
        digits.push_back(hit ? replacement_atom : c.y(u, v));
    }
    return comp.table[si.encode(digits)];
}

std::string describe_configuration(const Configuration& c) {
    std::ostringstream os;
    os << "x=[";
    for (int i = 0; i < c.n; ++i) os << (i ? "," : "") << c.x[i];
    os << "] y=[";
    bool first = true;
    for (int i = 0; i < c.n; ++i) {
        for (int j = i + 1; j < c.n; ++j) {
            os << (first ? "" : ",") << c.y(i, j);
            first = false;
        }
    }
    os << "]";
    return os.str();
}

}  // namespace

PairCoefficients coefficients(const std::vector<int>& a,
                              const std::vector<std::pair<int, int>>& b, int n, int k) {
    if (b.empty()) throw ArgumentError("mu_{A,B} needs a nonempty edge set B");
    if (n < k) throw ArgumentError("coefficients need n >= k");
    std::vector<int> marked;
    Motif g = support_graph_of(a, b, &marked);
    int v = g.vertex_count;
    double aut = static_cast<double>(marked_automorphism_count(g, marked));
    double choose = binomial(n - v, k - v);  // == C(n-v, n-k)
    PairCoefficients out;
    out.nu = choose / aut;
    out.mu = out.nu / static_cast<double>(b.size());
    return out;
}

SteinPairReport check_linearity_x_swap(const Decomposition& dec, int n) {
    KernelSummary summary = summarize(dec);
    if (summary.sigma1 <= summary.zero_tol) {
        throw InapplicableError("vertex-swap pair needs sigma1 > 0");
    }
    const Kernel& f = dec.kernel;
    int k = f.k;
    if (n < k) throw ArgumentError("check needs n >= k");
    const HoeffdingComponent* f1 = dec.find({0}, {});
    double sigma_n = std::sqrt(variance_closed_form(dec, n).sigma_n_sq);
    double coef = binomial(n - 1, k - 1) / sigma_n;

    double m1 = 0.0;
    for (int atom = 0; atom < f.x_space.size(); ++atom) {
        m1 += f.x_space.probs[atom] * f1->table[atom];
    }

    SteinPairReport rep;
    rep.construction = "vertex-swap";
    rep.lambda = 1.0 / n;
    rep.r_term = 0.0;

    // Exhaustive over x-configurations; D and W ignore Y.
    int nx = f.x_space.size();
    if (std::pow(nx, n) > 2e6) throw CapabilityError("x-configuration space too large");
    std::vector<int> xs(static_cast<std::size_t>(n), 0);
    while (true) {
        double w_value = 0.0;
        for (int i = 0; i < n; ++i) w_value += f1->table[xs[static_cast<std::size_t>(i)]];
        w_value *= coef;
        double conditional = 0.0;  // E{D | X = x}
        for (int i = 0; i < n; ++i) {
            conditional += coef * (f1->table[xs[static_cast<std::size_t>(i)]] - m1);
        }
        conditional /= n;
        double residual = std::abs(conditional - w_value / n);
        if (residual > rep.linearity_residual) {
            rep.linearity_residual = residual;
            std::ostringstream os;
            os << "x=[";
            for (int i = 0; i < n; ++i) os << (i ? "," : "") << xs[static_cast<std::size_t>(i)];
            os << "]";
            rep.worst_configuration = os.str();
        }
        int pos = n - 1;
        while (pos >= 0 && ++xs[static_cast<std::size_t>(pos)] == nx) xs[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }

    // E{D Delta}/(2 lambda) with D = Delta: (n/2) E{D^2}.
    double second = 0.0;
    for (int a = 0; a < nx; ++a) {
        for (int b = 0; b < nx; ++b) {
            double d = f1->table[a] - f1->table[b];
            second += f.x_space.probs[a] * f.x_space.probs[b] * d * d;
        }
    }
    rep.d_delta_mean = 0.5 * n * coef * coef * second;
    return rep;
}

double edge_swap_d_value(const Decomposition& dec, int n, const Configuration& c, int i, int j,
                         int replacement_atom) {
    KernelSummary summary = summarize(dec);
    auto reps = principal_class_reps(dec, summary);
    double sigma_n = std::sqrt(variance_closed_form(dec, n).sigma_n_sq);
    auto tuples = ordered_tuples(n, summary.d);
    double d_value = 0.0;
    for (const auto* comp : reps) {
        double mu = coefficients(comp->a, comp->b, n, dec.kernel.k).mu;
        for (const auto& alpha : tuples) {
            double now = component_at(dec.kernel, *comp, alpha, c);
            double swapped = component_at_swapped(dec.kernel, *comp, alpha, c, i, j, replacement_atom);
            d_value += mu * (now - swapped);
        }
    }
    return d_value / sigma_n;
}

SteinPairReport check_linearity_edge_swap(const Decomposition& dec, int n) {
    KernelSummary summary = summarize(dec);
    if (summary.d < 2) {
        throw ArgumentError("edge-swap pair needs principal degree >= 2 (use the vertex-swap check)");
    }
    if (!summary.all_connected) {
        throw NonnormalRegimeError(
            "principal support graphs are not all connected: nonnormal limit regime");
    }
    const Kernel& f = dec.kernel;
    int k = f.k;
    if (n < k) throw ArgumentError("check needs n >= k");
    auto reps = principal_class_reps(dec, summary);
    double sigma_n = std::sqrt(variance_closed_form(dec, n).sigma_n_sq);
    auto tuples = ordered_tuples(n, summary.d);

    struct RepCoef {
        const HoeffdingComponent* comp;
        double mu, nu;
    };
    std::vector<RepCoef> rc;
    for (const auto* comp : reps) {
        auto co = coefficients(comp->a, comp->b, n, k);
        rc.push_back({comp, co.mu, co.nu});
    }

    SteinPairReport rep;
    rep.construction = "edge-swap";
    rep.lambda = 2.0 / (static_cast<double>(n) * (n - 1));
    rep.r_term = 0.0;

    enumerate_configurations(f, n, [&](const Configuration& c, double) {
        double w_value = 0.0;
        for (const auto& e : rc) {
            for (const auto& alpha : tuples) {
                w_value += e.nu * component_at(f, *e.comp, alpha, c);
            }
        }
        w_value /= sigma_n;

        double conditional = 0.0;  // E{D | X, Y}: average over (I,J) and Y'
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                for (const auto& e : rc) {
                    for (const auto& alpha : tuples) {
                        double now = component_at(f, *e.comp, alpha, c);
                        double averaged = 0.0;
                        for (int atom = 0; atom < f.y_space.size(); ++atom) {
                            averaged += f.y_space.probs[atom] *
                                        component_at_swapped(f, *e.comp, alpha, c, i, j, atom);
                        }
                        conditional += 2.0 * e.mu * (now - averaged);
                    }
                }
            }
        }
        conditional /= sigma_n * static_cast<double>(n) * (n - 1);

        double residual = std::abs(conditional - rep.lambda * w_value);
        if (residual > rep.linearity_residual) {
            rep.linearity_residual = residual;
            rep.worst_configuration = describe_configuration(c);
        }
    });

    // E{D Delta}/(2 lambda) by full enumeration over (X, Y), (I,J), Y'.
    long double d_delta = 0.0L;
    enumerate_configurations(f, n, [&](const Configuration& c, double prob) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                for (int atom = 0; atom < f.y_space.size(); ++atom) {
                    double d_val = 0.0, delta_val = 0.0;
                    for (const auto& e : rc) {
                        for (const auto& alpha : tuples) {
                            double diff = component_at(f, *e.comp, alpha, c) -
                                          component_at_swapped(f, *e.comp, alpha, c, i, j, atom);
                            d_val += e.mu * diff;
                            delta_val += e.nu * diff;
                        }
                    }
                    d_delta += static_cast<long double>(prob) * f.y_space.probs[atom] *
                               (2.0 / (static_cast<double>(n) * (n - 1))) *
                               (d_val / sigma_n) * (delta_val / sigma_n);
                }
            }
        }
    });
    rep.d_delta_mean = static_cast<double>(d_delta) / (2.0 * rep.lambda);
    return rep;
}

double be_bound_theorem21(const KernelSummary& summary, int k, int n) {
    if (n < 1) throw ArgumentError("bound needs n >= 1");
    if (summary.sigma1 <= summary.zero_tol) {
        throw InapplicableError("Theorem bound needs sigma1 > 0");
    }
    return 12.0 * k * summary.tau * summary.tau / (std::sqrt(static_cast<double>(n)) * summary.sigma1 * summary.sigma1);
}

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kInvSqrt2 = 0.7071067811865475244;

}  // namespace

double stein_solution(double z, double w) {
    // sqrt(2pi) e^{w^2/2} Phi(min) (1 - Phi(max)) assembled from scaled
    // erfc factors; exact cancellation keeps every piece in range:
    //   f = sqrt(2pi)/4 erfcx(-m/sqrt2) erfcx(M/sqrt2) e^{-z^2/2},  m<=0
    double m = std::min(w, z);
    double big = std::max(w, z);
    double tail = erfcx(big * kInvSqrt2);
    if (m <= 0.0) {
        return 0.25 * kSqrt2Pi * erfcx(-m * kInvSqrt2) * std::exp(-0.5 * z * z) * tail;
    }
    double t = 2.0 * std::exp(0.5 * (m * m - z * z)) - erfcx(m * kInvSqrt2) * std::exp(-0.5 * z * z);
    return 0.25 * kSqrt2Pi * tail * t;
}

double stein_solution_derivative(double z, double w) {
    double indicator_part = w <= z ? 0.5 * std::erfc(z * kInvSqrt2)
                                   : -(1.0 - 0.5 * std::erfc(z * kInvSqrt2));
    return w * stein_solution(z, w) + indicator_part;
}

std::string format_stein_report(const SteinPairReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "construction " << r.construction << "\n";
    os << "lambda " << r.lambda << "\n";
    os << "linearity_residual " << r.linearity_residual << "\n";
    os << "r_term " << r.r_term << "\n";
    os << "d_delta_mean " << r.d_delta_mean << "\n";
    os << "worst_configuration " << r.worst_configuration << "\n";
    return os.str();
}

}  // namespace ustatlab
