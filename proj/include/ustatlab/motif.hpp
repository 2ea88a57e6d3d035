#ifndef USTATLAB_MOTIF_HPP
#define USTATLAB_MOTIF_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ustatlab/common.hpp"

namespace ustatlab {

/// Small labeled simple graph. Vertices are 0-indexed and contiguous;
/// isolated vertices are allowed in storage.
struct Motif {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;  // normalized i < j, sorted, no duplicates

    Motif() = default;
    Motif(int vertices, std::vector<std::pair<int, int>> edge_list);

    int edge_count() const { return static_cast<int>(edges.size()); }
    bool has_edge(int i, int j) const;

    /// Vertices incident to at least one edge, sorted.
    std::vector<int> non_isolated_vertices() const;

    bool operator==(const Motif& other) const = default;
};

struct MotifStats {
    int edge_count = 0;
    int two_star_count = 0;
    int triangle_count = 0;
    std::vector<int> degree_sequence;
};

MotifStats motif_stats(const Motif& m);

/// |Aut(F)| by exhaustive permutation scan. Rejects vertex_count > 10.
std::int64_t automorphism_count(const Motif& m);

/// Automorphisms that additionally preserve the marked vertex subset setwise.
/// `marked` holds vertex labels of m.
std::int64_t marked_automorphism_count(const Motif& m, const std::vector<int>& marked);

/// Connectivity of the graph restricted to its non-isolated vertices.
/// Empty and single-vertex graphs count as connected.
bool is_connected(const Motif& m);

/// Vertex-deleted connectivity: for every non-isolated vertex r, removing r
/// and its incident edges must leave a graph (isolated survivors included)
/// that is connected or has no vertices.
bool is_strongly_connected(const Motif& m);

/// All distinct edge subsets H of K_k with H isomorphic to m on vertex set
/// [0,k). Requires vertex_count == k; the list has k!/|Aut(m)| entries.
std::vector<std::vector<std::pair<int, int>>> isomorphic_embeddings(const Motif& m, int k);

/// Text format: "v <n>" header line, then "e <i> <j>" per edge. '#' comments
/// and blank lines are ignored. Duplicate edges and self-loops are rejected.
Motif parse_motif(std::istream& in);
Motif load_motif(const std::string& path);
std::string format_motif(const Motif& m);

Motif make_edge_motif();
Motif make_two_star_motif();
Motif make_triangle_motif();
Motif make_path_motif(int vertices);
Motif make_cycle_motif(int vertices);

}  // namespace ustatlab

#endif
