#include "ustatlab/hoeffding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ustatlab {

namespace {

std::vector<int> mask_to_list(std::uint32_t mask, int bits) {
    std::vector<int> out;
    for (int i = 0; i < bits; ++i) {
        if (mask & (1u << i)) out.push_back(i);
    }
    return out;
}

// Extracts the (x_A, y_B) digits of a full joint assignment.
void extract_digits(const std::vector<int>& full, int k, const std::vector<int>& a,
                    const std::vector<int>& b_ranks, std::vector<int>& out) {
    out.clear();
    for (int pos : a) out.push_back(full[static_cast<std::size_t>(pos)]);
    for (int pr : b_ranks) out.push_back(full[static_cast<std::size_t>(k + pr)]);
}

struct ComponentShape {
    std::uint32_t mask_a = 0;
    std::uint32_t mask_b = 0;
    std::vector<int> a;
    std::vector<int> b_ranks;
    SubIndexer sub;
};

}  // namespace

const HoeffdingComponent* Decomposition::find(const std::vector<int>& a,
                                              const std::vector<std::pair<int, int>>& b) const {
    for (const auto& c : components) {
        if (c.a == a && c.b == b) return &c;
    }
    return nullptr;
}

double Decomposition::component_value(const HoeffdingComponent& c, const std::vector<int>& digits) const {
    int k = kernel.k;
    std::vector<int> sub;
    sub.reserve(c.a.size() + c.b.size());
    for (int pos : c.a) sub.push_back(digits[static_cast<std::size_t>(pos)]);
    for (const auto& [i, j] : c.b) sub.push_back(digits[static_cast<std::size_t>(k + pair_rank(i, j, k))]);
    SubIndexer si(static_cast<int>(c.a.size()), static_cast<int>(c.b.size()),
                  kernel.x_space.size(), kernel.y_space.size());
    return c.table[si.encode(sub)];
}

Eigen::VectorXd Decomposition::level_kernel(int level) const {
    JointIndexer idx = kernel.indexer();
    if (level < 0 || level > kernel.k) throw ArgumentError("level out of range [0, k]");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(idx.size());
    if (level == 0) {
        out.setConstant(mean_component().table[0]);
        return out;
    }
    std::vector<int> digits(static_cast<std::size_t>(idx.digit_count()), 0);
    std::int64_t i = 0;
    do {
        double total = 0.0;
        for (const auto& c : components) {
            if (c.v == level) total += component_value(c, digits);
        }
        out[i++] = total;
    } while (idx.next(digits));
    return out;
}

Decomposition hoeffding_decompose(const Kernel& f) {
    if (!check_symmetry(f)) throw ValidationError("kernel is not symmetric");
    JointIndexer idx = f.indexer();
    int k = f.k;
    int pair_bits = idx.pair_count();
    auto pairs = canonical_pairs(k);
    int nx = f.x_space.size();
    int ny = f.y_space.size();

    // Shapes in increasing |A|+|B| so inclusion-exclusion sub-terms exist.
    std::vector<ComponentShape> shapes;
    for (std::uint32_t ma = 0; ma < (1u << k); ++ma) {
        for (std::uint32_t mb = 0; mb < (1u << pair_bits); ++mb) {
            ComponentShape s;
            s.mask_a = ma;
            s.mask_b = mb;
            s.a = mask_to_list(ma, k);
            s.b_ranks = mask_to_list(mb, pair_bits);
            s.sub = SubIndexer(static_cast<int>(s.a.size()), static_cast<int>(s.b_ranks.size()), nx, ny);
            shapes.push_back(std::move(s));
        }
    }
    std::stable_sort(shapes.begin(), shapes.end(), [](const ComponentShape& l, const ComponentShape& r) {
        return l.a.size() + l.b_ranks.size() < r.a.size() + r.b_ranks.size();
    });

    // Conditional expectation tables h_{A,B} = E{f | X_A, Y_B}, one pass of
    // the full table per shape; independence makes the complements integrate
    // to their product weights.
    std::vector<Eigen::VectorXd> cond(static_cast<std::size_t>(1) << (k + pair_bits));
    auto shape_key = [pair_bits](std::uint32_t ma, std::uint32_t mb) {
        return (static_cast<std::size_t>(ma) << pair_bits) | mb;
    };
    std::vector<int> full(static_cast<std::size_t>(idx.digit_count()), 0);
    std::vector<int> sub;
    for (const auto& s : shapes) {
        Eigen::VectorXd h = Eigen::VectorXd::Zero(s.sub.size());
        std::fill(full.begin(), full.end(), 0);
        std::int64_t i = 0;
        do {
            double w = 1.0;
            for (int pos = 0; pos < k; ++pos) {
                if (!(s.mask_a & (1u << pos))) w *= f.x_space.probs[full[static_cast<std::size_t>(pos)]];
            }
            for (int pr = 0; pr < pair_bits; ++pr) {
                if (!(s.mask_b & (1u << pr))) w *= f.y_space.probs[full[static_cast<std::size_t>(k + pr)]];
            }
            extract_digits(full, k, s.a, s.b_ranks, sub);
            h[s.sub.encode(sub)] += w * f.table[i++];
        } while (idx.next(full));
        cond[shape_key(s.mask_a, s.mask_b)] = std::move(h);
    }

    Decomposition dec;
    dec.kernel = f;
    for (const auto& s : shapes) {
        HoeffdingComponent c;
        c.a = s.a;
        for (int pr : s.b_ranks) c.b.push_back(pairs[static_cast<std::size_t>(pr)]);

        // Inclusion-exclusion over sub-pairs (A', B').
        Eigen::VectorXd table = Eigen::VectorXd::Zero(s.sub.size());
        int total_bits = static_cast<int>(s.a.size() + s.b_ranks.size());
        std::vector<int> digits, subsub;
        for (std::uint32_t sub_a = s.mask_a;; sub_a = (sub_a - 1) & s.mask_a) {
            for (std::uint32_t sub_b = s.mask_b;; sub_b = (sub_b - 1) & s.mask_b) {
                auto a_list = mask_to_list(sub_a, k);
                auto b_list = mask_to_list(sub_b, pair_bits);
                const Eigen::VectorXd& h = cond[shape_key(sub_a, sub_b)];
                SubIndexer hsub(static_cast<int>(a_list.size()), static_cast<int>(b_list.size()), nx, ny);
                int sign_bits = total_bits - static_cast<int>(a_list.size() + b_list.size());
                double sign = sign_bits % 2 == 0 ? 1.0 : -1.0;
                // positions of the sub-shape coordinates inside the shape's table
                std::vector<int> take;
                for (std::size_t i = 0; i < s.a.size(); ++i) {
                    if (sub_a & (1u << s.a[i])) take.push_back(static_cast<int>(i));
                }
                for (std::size_t i = 0; i < s.b_ranks.size(); ++i) {
                    if (sub_b & (1u << s.b_ranks[i])) take.push_back(static_cast<int>(s.a.size() + i));
                }
                digits.assign(static_cast<std::size_t>(total_bits), 0);
                std::int64_t ti = 0;
                if (s.sub.size() > 0) {
                    while (true) {
                        subsub.clear();
                        for (int pos : take) subsub.push_back(digits[static_cast<std::size_t>(pos)]);
                        table[ti] += sign * h[hsub.encode(subsub)];
                        ++ti;
                        int pos = total_bits - 1;
                        while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == s.sub.radix(pos)) {
                            digits[static_cast<std::size_t>(pos--)] = 0;
                        }
                        if (pos < 0) break;
                    }
                }
                if (sub_b == 0) break;
            }
            if (sub_a == 0) break;
        }
        c.table = std::move(table);

        double var = 0.0;
        {
            std::vector<int> d2(static_cast<std::size_t>(total_bits), 0);
            std::int64_t ti = 0;
            while (true) {
                double w = 1.0;
                for (int pos = 0; pos < total_bits; ++pos) {
                    const auto& space = pos < static_cast<int>(s.a.size()) ? f.x_space : f.y_space;
                    w *= space.probs[d2[static_cast<std::size_t>(pos)]];
                }
                var += w * c.table[ti] * c.table[ti];
                ++ti;
                int pos = total_bits - 1;
                while (pos >= 0 && ++d2[static_cast<std::size_t>(pos)] == s.sub.radix(pos)) {
                    d2[static_cast<std::size_t>(pos--)] = 0;
                }
                if (pos < 0) break;
            }
        }
        c.sigma = std::sqrt(std::max(0.0, var));

        std::set<int> supp(c.a.begin(), c.a.end());
        for (const auto& [i, j] : c.b) {
            supp.insert(i);
            supp.insert(j);
        }
        c.support.assign(supp.begin(), supp.end());
        c.v = static_cast<int>(c.support.size());
        std::vector<std::pair<int, int>> edges;
        auto relabel = [&](int vtx) {
            return static_cast<int>(std::lower_bound(c.support.begin(), c.support.end(), vtx) - c.support.begin());
        };
        for (const auto& [i, j] : c.b) edges.emplace_back(relabel(i), relabel(j));
        c.support_graph = Motif(c.v, std::move(edges));
        for (int vtx : c.a) c.marked.push_back(relabel(vtx));

        dec.components.push_back(std::move(c));
    }
    return dec;
}

KernelSummary summarize(const Decomposition& dec) {
    KernelSummary s;
    s.tau = std::pow(dec.kernel.moment4(), 0.25);
    s.zero_tol = 1e-9 * std::max(s.tau, 1.0);
    int best = dec.kernel.k + 1;
    for (const auto& c : dec.components) {
        if (c.is_mean() || c.sigma <= s.zero_tol) continue;
        best = std::min(best, c.v);
    }
    if (best > dec.kernel.k) throw DegenerateError("kernel is constant: every projection vanishes");
    s.d = best;
    s.y_only = true;
    for (std::size_t i = 0; i < dec.components.size(); ++i) {
        const auto& c = dec.components[i];
        if (!c.a.empty() && c.sigma > s.zero_tol) s.y_only = false;
        if (c.v == s.d && c.sigma > s.zero_tol) s.principal.push_back(static_cast<int>(i));
    }
    const HoeffdingComponent* first = dec.find({0}, {});
    s.sigma1 = first != nullptr ? first->sigma : 0.0;
    s.sigma_min = 0.0;
    s.all_connected = true;
    s.all_strongly_connected = true;
    bool first_principal = true;
    for (int i : s.principal) {
        const auto& c = dec.components[static_cast<std::size_t>(i)];
        s.sigma_min = first_principal ? c.sigma : std::min(s.sigma_min, c.sigma);
        first_principal = false;
        // A-vertices not covered by B are isolated nodes of the support
        // graph, which disconnect it once v >= 2.
        bool spanning = c.v <= 1 ||
                        c.support_graph.non_isolated_vertices().size() == static_cast<std::size_t>(c.v);
        bool connected = spanning && is_connected(c.support_graph);
        if (!connected) s.all_connected = false;
        if (!connected || !is_strongly_connected(c.support_graph)) s.all_strongly_connected = false;
    }
    return s;
}

ClosedFormProjections er_closed_form_projections(const Motif& f, double p, CountMode mode) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("closed forms need p in (0,1)");
    MotifStats st = motif_stats(f);
    double aut = static_cast<double>(automorphism_count(f));
    const double y_atoms[2] = {1.0, 0.0};  // atom order of the Bernoulli discretization

    ClosedFormProjections out;
    if (mode == CountMode::Injective) {
        double coef = 2.0 * st.edge_count * static_cast<double>(factorial_u64(f.vertex_count - 2)) / aut *
                      std::pow(p, st.edge_count - 1);
        out.single_edge.resize(2);
        for (int a = 0; a < 2; ++a) out.single_edge[a] = coef * (y_atoms[a] - p);
        return out;
    }

    double pairs = binomial(f.vertex_count, 2);
    double triples = binomial(f.vertex_count, 3);
    double e_bar = st.edge_count / pairs;
    double n_f = static_cast<double>(factorial_u64(f.vertex_count)) / aut * std::pow(p, st.edge_count) *
                 std::pow(1.0 - p, pairs - st.edge_count);
    double q = p * (1.0 - p);

    out.single_edge.resize(2);
    double c1 = n_f / q * (e_bar - p);
    for (int a = 0; a < 2; ++a) out.single_edge[a] = c1 * (y_atoms[a] - p);

    if (f.vertex_count >= 3) {
        double s_bar = st.two_star_count / (3.0 * triples);
        double t_bar = st.triangle_count / triples;
        double c2 = n_f / (q * q) * (s_bar - 2.0 * p * e_bar + p * p);
        Eigen::VectorXd two_star(4);
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                two_star[a * 2 + b] = c2 * (y_atoms[a] - p) * (y_atoms[b] - p);
            }
        }
        out.two_star = std::move(two_star);
        double c3 = n_f / (q * q * q) *
                    (t_bar - 3.0 * p * s_bar + 3.0 * p * p * e_bar - p * p * p);
        Eigen::VectorXd tri(8);
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                for (int c = 0; c < 2; ++c) {
                    tri[a * 4 + b * 2 + c] = c3 * (y_atoms[a] - p) * (y_atoms[b] - p) * (y_atoms[c] - p);
                }
            }
        }
        out.triangle = std::move(tri);
    }
    return out;
}

namespace {

std::string list_to_string(const std::vector<int>& xs) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    os << "}";
    return os.str();
}

std::string pairs_to_string(const std::vector<std::pair<int, int>>& ps) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < ps.size(); ++i) os << (i ? "," : "") << "(" << ps[i].first << "," << ps[i].second << ")";
    os << "}";
    return os.str();
}

}  // namespace

std::string format_decomposition(const Decomposition& dec, const KernelSummary* summary) {
    std::ostringstream os;
    os.precision(17);
    os << "# hoeffding components: A B v sigma table...\n";
    for (const auto& c : dec.components) {
        os << list_to_string(c.a) << " " << pairs_to_string(c.b) << " " << c.v << " " << c.sigma;
        for (Eigen::Index i = 0; i < c.table.size(); ++i) os << " " << c.table[i];
        os << "\n";
    }
    if (summary != nullptr) {
        os << "d " << summary->d << "\n";
        os << "sigma1 " << summary->sigma1 << "\n";
        os << "sigma_min " << summary->sigma_min << "\n";
        os << "tau " << summary->tau << "\n";
        os << "principal_count " << summary->principal.size() << "\n";
        os << "all_connected " << (summary->all_connected ? "true" : "false") << "\n";
        os << "all_strongly_connected " << (summary->all_strongly_connected ? "true" : "false") << "\n";
        os << "y_only " << (summary->y_only ? "true" : "false") << "\n";
    }
    return os.str();
}

}  // namespace ustatlab
