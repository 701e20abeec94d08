#pragma once

// Piece-level structure of a fractal cube: which pieces K_i = (K + d_i)/n
// meet, in what, and what that says about the topology of K.
//
// For pieces i, j with a = d_i - d_j in {-1,0,1}^3 \ {0}:
//     K_i ∩ K_j = (F_a + d_j) / n.
// Other pairs lie in disjoint subcubes.

#include "fracube/core.hpp"
#include "fracube/faces.hpp"

#include <compare>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fracube {

struct PieceEdge {
    int i = 0; // i < j, indices into the sorted digit list
    int j = 0;
    Offset alpha; // d_i - d_j
    FaceClass face;
};

struct PieceGraph {
    int vertices = 0;
    std::vector<PieceEdge> edges;

    std::vector<std::pair<int, int>> pairs() const;
    bool is_connected() const;
    /// Connected with vertices - 1 edges.
    bool is_tree() const;
};

struct BlackVertex {
    RationalPoint point;
    std::vector<int> pieces; // sorted, each piece containing the point
};

struct BipartiteGraph {
    int pieces = 0;
    std::vector<BlackVertex> points; // sorted by point

    std::size_t edge_count() const;
    bool is_connected() const;
    bool is_tree() const;
};

/// Canonical code of a simple graph on at most 12 vertices: the smallest
/// upper-triangle adjacency string (row-major, first pair most significant)
/// over all labelings compatible with a colour refinement that starts from
/// vertex degrees.
struct GraphCode {
    int vertices = 0;
    unsigned __int128 bits = 0;

    auto operator<=>(const GraphCode&) const = default;

    int edge_count() const;
    std::vector<std::pair<int, int>> edges() const;
    bool is_tree() const;
    /// Two hex digits of vertex count followed by the adjacency bits.
    std::string hex() const;
    static GraphCode from_hex(std::string_view text);
};

inline constexpr int kMaxGraphVertices = 12;

// Every operation below has an overload on a prebuilt automaton so callers
// can share one automaton across queries.

PieceGraph piece_adjacency(const NeighborAutomaton& automaton);
PieceGraph piece_adjacency(const DigitSet& set);

/// Hata's criterion over nonempty pairwise intersections.
bool is_connected(const NeighborAutomaton& automaton);
bool is_connected(const DigitSet& set);

/// Every offset realised by a digit pair has a face that is not Multi.
bool has_one_point_property(const NeighborAutomaton& automaton);
bool has_one_point_property(const DigitSet& set);

/// Point-annotated edges; throws OnePointViolation.
PieceGraph intersection_graph(const NeighborAutomaton& automaton);
PieceGraph intersection_graph(const DigitSet& set);

/// Throws OnePointViolation.
BipartiteGraph bipartite_graph(const NeighborAutomaton& automaton);
BipartiteGraph bipartite_graph(const DigitSet& set);

bool verify_no_triple_points(const NeighborAutomaton& automaton);
bool verify_no_triple_points(const DigitSet& set);

/// True iff the bipartite intersection graph is a tree. Also runs the simple
/// graph test and throws InternalInconsistency when the two disagree without
/// triple points. Throws OnePointViolation or Disconnected on bad input.
bool is_dendrite(const NeighborAutomaton& automaton);
bool is_dendrite(const DigitSet& set);

/// Throws TooLarge above kMaxGraphVertices.
GraphCode graph_code(int vertices, std::span<const std::pair<int, int>> edges);
GraphCode graph_code(const PieceGraph& graph);

/// DOT text: white vertices K1..KN, black vertices p1..pk.
std::string to_dot(const BipartiteGraph& graph);

} // namespace fracube
