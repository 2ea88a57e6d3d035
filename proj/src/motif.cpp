#include "ustatlab/motif.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace ustatlab {

Motif::Motif(int vertices, std::vector<std::pair<int, int>> edge_list)
    : vertex_count(vertices), edges(std::move(edge_list)) {
    if (vertex_count < 0) throw ArgumentError("motif with negative vertex count");
    for (auto& [i, j] : edges) {
        if (i == j) throw ValidationError("motif has a self-loop");
        if (i > j) std::swap(i, j);
        if (i < 0 || j >= vertex_count) throw ValidationError("motif edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw ValidationError("motif has a duplicate edge");
    }
}

bool Motif::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::vector<int> Motif::non_isolated_vertices() const {
    std::set<int> touched;
    for (const auto& [i, j] : edges) {
        touched.insert(i);
        touched.insert(j);
    }
    return {touched.begin(), touched.end()};
}

MotifStats motif_stats(const Motif& m) {
    MotifStats s;
    s.edge_count = m.edge_count();
    s.degree_sequence.assign(static_cast<std::size_t>(m.vertex_count), 0);
    for (const auto& [i, j] : m.edges) {
        ++s.degree_sequence[static_cast<std::size_t>(i)];
        ++s.degree_sequence[static_cast<std::size_t>(j)];
    }
    for (int d : s.degree_sequence) s.two_star_count += d * (d - 1) / 2;
    for (int a = 0; a < m.vertex_count; ++a) {
        for (int b = a + 1; b < m.vertex_count; ++b) {
            if (!m.has_edge(a, b)) continue;
            for (int c = b + 1; c < m.vertex_count; ++c) {
                if (m.has_edge(a, c) && m.has_edge(b, c)) ++s.triangle_count;
            }
        }
    }
    return s;
}

namespace {

bool permutation_preserves_edges(const Motif& m, const std::vector<int>& perm) {
    for (const auto& [i, j] : m.edges) {
        if (!m.has_edge(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)])) return false;
    }
    return true;
}

}  // namespace

std::int64_t automorphism_count(const Motif& m) {
    return marked_automorphism_count(m, {});
}

std::int64_t marked_automorphism_count(const Motif& m, const std::vector<int>& marked) {
    if (m.vertex_count > 10) {
        throw CapabilityError("automorphism scan limited to 10 vertices");
    }
    if (m.vertex_count == 0) return 1;
    std::vector<char> is_marked(static_cast<std::size_t>(m.vertex_count), 0);
    for (int v : marked) {
        if (v < 0 || v >= m.vertex_count) throw ArgumentError("marked vertex out of range");
        is_marked[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<int> perm(static_cast<std::size_t>(m.vertex_count));
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t count = 0;
    do {
        bool ok = true;
        for (int v = 0; v < m.vertex_count && ok; ++v) {
            if (is_marked[static_cast<std::size_t>(v)] != is_marked[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])]) ok = false;
        }
        if (ok && permutation_preserves_edges(m, perm)) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

namespace {

// Connectivity over an explicit vertex list; isolated members make the graph
// disconnected once the list has two or more vertices.
bool connected_on(const Motif& m, const std::vector<int>& vertices, int deleted) {
    std::vector<int> verts;
    for (int v : vertices) {
        if (v != deleted) verts.push_back(v);
    }
    if (verts.size() <= 1) return true;
    std::vector<char> seen(static_cast<std::size_t>(m.vertex_count), 0);
    std::vector<char> member(static_cast<std::size_t>(m.vertex_count), 0);
    for (int v : verts) member[static_cast<std::size_t>(v)] = 1;
    std::vector<int> stack{verts.front()};
    seen[static_cast<std::size_t>(verts.front())] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& [a, b] : m.edges) {
            if (a == deleted || b == deleted) continue;
            int other = -1;
            if (a == v) other = b;
            else if (b == v) other = a;
            if (other < 0 || !member[static_cast<std::size_t>(other)] || seen[static_cast<std::size_t>(other)]) continue;
            seen[static_cast<std::size_t>(other)] = 1;
            ++reached;
            stack.push_back(other);
        }
    }
    return reached == verts.size();
}

}  // namespace

bool is_connected(const Motif& m) {
    return connected_on(m, m.non_isolated_vertices(), -1);
}

bool is_strongly_connected(const Motif& m) {
    std::vector<int> verts = m.non_isolated_vertices();
    if (verts.empty()) return true;
    if (!connected_on(m, verts, -1)) return false;
    for (int r : verts) {
        if (!connected_on(m, verts, r)) return false;
    }
    return true;
}

std::vector<std::vector<std::pair<int, int>>> isomorphic_embeddings(const Motif& m, int k) {
    if (m.vertex_count != k) throw ArgumentError("isomorphic_embeddings requires v(F) == k");
    if (k > 10) throw CapabilityError("embedding scan limited to 10 vertices");
    std::set<std::vector<std::pair<int, int>>> images;
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<std::pair<int, int>> image;
        image.reserve(m.edges.size());
        for (const auto& [i, j] : m.edges) {
            int a = perm[static_cast<std::size_t>(i)];
            int b = perm[static_cast<std::size_t>(j)];
            if (a > b) std::swap(a, b);
            image.emplace_back(a, b);
        }
        std::sort(image.begin(), image.end());
        images.insert(std::move(image));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {images.begin(), images.end()};
}

Motif parse_motif(std::istream& in) {
    int vertex_count = -1;
    std::vector<std::pair<int, int>> edges;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            if (vertex_count >= 0) throw ParseError("line " + std::to_string(line_no) + ": repeated v header");
            if (!(ls >> vertex_count) || vertex_count < 1) {
                throw ParseError("line " + std::to_string(line_no) + ": bad vertex count");
            }
        } else if (tag == "e") {
            int i = -1, j = -1;
            if (vertex_count < 0) throw ParseError("line " + std::to_string(line_no) + ": edge before v header");
            if (!(ls >> i >> j)) throw ParseError("line " + std::to_string(line_no) + ": bad edge line");
            if (i == j) throw ParseError("line " + std::to_string(line_no) + ": self-loop");
            if (i < 0 || j < 0 || i >= vertex_count || j >= vertex_count) {
                throw ParseError("line " + std::to_string(line_no) + ": endpoint out of range");
            }
            if (i > j) std::swap(i, j);
            if (std::find(edges.begin(), edges.end(), std::make_pair(i, j)) != edges.end()) {
                throw ParseError("line " + std::to_string(line_no) + ": duplicate edge");
            }
            edges.emplace_back(i, j);
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": unknown tag '" + tag + "'");
        }
    }
    if (vertex_count < 0) throw ParseError("missing v header");
    return Motif(vertex_count, std::move(edges));
}

Motif load_motif(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open motif file: " + path);
    return parse_motif(in);
}

std::string format_motif(const Motif& m) {
    std::ostringstream out;
    out << "v " << m.vertex_count << "\n";
    for (const auto& [i, j] : m.edges) out << "e " << i << " " << j << "\n";
    return out.str();
}

Motif make_edge_motif() { return Motif(2, {{0, 1}}); }

Motif make_two_star_motif() { return Motif(3, {{0, 1}, {0, 2}}); }

Motif make_triangle_motif() { return Motif(3, {{0, 1}, {0, 2}, {1, 2}}); }

Motif make_path_motif(int vertices) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < vertices; ++i) edges.emplace_back(i, i + 1);
    return Motif(vertices, std::move(edges));
}

Motif make_cycle_motif(int vertices) {
    if (vertices < 3) throw ArgumentError("cycle needs at least 3 vertices");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < vertices; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(0, vertices - 1);
    return Motif(vertices, std::move(edges));
}

}  // namespace ustatlab
