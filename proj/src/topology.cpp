#include "fracube/topology.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <map>
#include <numeric>

namespace fracube {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(int size) : parent_(static_cast<std::size_t>(size)) {
        std::iota(parent_.begin(), parent_.end(), 0);
        components_ = size;
    }
    int find(int v) {
        while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
        return v;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        parent_[std::max(a, b)] = std::min(a, b);
        --components_;
    }
    int components() const { return components_; }

private:
    std::vector<int> parent_;
    int components_ = 0;
};

// Realised offsets of the digit set, as (i, j, d_i - d_j) with i < j.
std::vector<std::pair<std::pair<int, int>, Offset>> realised_pairs(const DigitSet& set) {
    std::vector<std::pair<std::pair<int, int>, Offset>> out;
    const auto digits = set.digits();
    for (std::size_t i = 0; i < digits.size(); ++i)
        for (std::size_t j = i + 1; j < digits.size(); ++j)
            if (auto a = offset_between(digits[i], digits[j]))
                out.push_back({{static_cast<int>(i), static_cast<int>(j)}, *a});
    return out;
}

void require_one_point(const NeighborAutomaton& automaton) {
    if (!has_one_point_property(automaton))
        throw Error(Errc::OnePointViolation, render_compact(automaton.digit_set()) + " has a pair meeting in more than a point");
}

} // namespace

std::vector<std::pair<int, int>> PieceGraph::pairs() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges.size());
    for (const PieceEdge& e : edges) out.emplace_back(e.i, e.j);
    return out;
}

bool PieceGraph::is_connected() const {
    if (vertices <= 1) return true;
    DisjointSets sets(vertices);
    for (const PieceEdge& e : edges) sets.unite(e.i, e.j);
    return sets.components() == 1;
}

bool PieceGraph::is_tree() const {
    return is_connected() && static_cast<int>(edges.size()) == vertices - 1;
}

std::size_t BipartiteGraph::edge_count() const {
    std::size_t total = 0;
    for (const BlackVertex& b : points) total += b.pieces.size();
    return total;
}

bool BipartiteGraph::is_connected() const {
    const int total = pieces + static_cast<int>(points.size());
    if (total <= 1) return true;
    DisjointSets sets(total);
    for (std::size_t k = 0; k < points.size(); ++k)
        for (int piece : points[k].pieces) sets.unite(piece, pieces + static_cast<int>(k));
    return sets.components() == 1;
}

bool BipartiteGraph::is_tree() const {
    const std::size_t total = static_cast<std::size_t>(pieces) + points.size();
    return is_connected() && edge_count() + 1 == total;
}

PieceGraph piece_adjacency(const NeighborAutomaton& automaton) {
    const DigitSet& set = automaton.digit_set();
    PieceGraph graph;
    graph.vertices = static_cast<int>(set.size());
    std::array<std::optional<FaceClass>, Offset::kSlots> cache;
    for (const auto& [ij, alpha] : realised_pairs(set)) {
        auto& face = cache[alpha.slot()];
        if (!face) face = automaton.face_class(alpha);
        if (face->kind == FaceKind::Empty) continue;
        graph.edges.push_back({ij.first, ij.second, alpha, *face});
    }
    return graph;
}

PieceGraph piece_adjacency(const DigitSet& set) { return piece_adjacency(NeighborAutomaton(set)); }

bool is_connected(const NeighborAutomaton& automaton) {
    const DigitSet& set = automaton.digit_set();
    if (set.size() <= 1) return true;
    DisjointSets sets(static_cast<int>(set.size()));
    for (const auto& [ij, alpha] : realised_pairs(set))
        if (automaton.live(alpha)) sets.unite(ij.first, ij.second);
    return sets.components() == 1;
}

bool is_connected(const DigitSet& set) { return is_connected(NeighborAutomaton(set)); }

bool has_one_point_property(const NeighborAutomaton& automaton) {
    // F_{-a} = F_a - a, so each pair {a, -a} is decided once.
    std::array<bool, Offset::kSlots> done{};
    for (const auto& [ij, alpha] : realised_pairs(automaton.digit_set())) {
        const int slot = std::min(alpha.slot(), (-alpha).slot());
        if (done[slot]) continue;
        done[slot] = true;
        if (automaton.classify(alpha) == FaceKind::Multi) return false;
    }
    return true;
}

bool has_one_point_property(const DigitSet& set) { return has_one_point_property(NeighborAutomaton(set)); }

PieceGraph intersection_graph(const NeighborAutomaton& automaton) {
    require_one_point(automaton);
    PieceGraph graph = piece_adjacency(automaton);
    std::erase_if(graph.edges, [](const PieceEdge& e) { return e.face.kind != FaceKind::Point; });
    return graph;
}

PieceGraph intersection_graph(const DigitSet& set) { return intersection_graph(NeighborAutomaton(set)); }

BipartiteGraph bipartite_graph(const NeighborAutomaton& automaton) {
    const PieceGraph graph = intersection_graph(automaton);
    const DigitSet& set = automaton.digit_set();
    const Rational scale(1, set.order());
    std::map<RationalPoint, std::vector<int>> points;
    for (const PieceEdge& e : graph.edges) {
        const RationalPoint& f = e.face.point->value;
        const Digit& dj = set[static_cast<std::size_t>(e.j)];
        RationalPoint p;
        for (int axis = 0; axis < 3; ++axis) p[axis] = (f[axis] + dj[axis]) * scale;
        auto& pieces = points[p];
        pieces.push_back(e.i);
        pieces.push_back(e.j);
    }
    BipartiteGraph out;
    out.pieces = graph.vertices;
    for (auto& [p, pieces] : points) {
        std::sort(pieces.begin(), pieces.end());
        pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
        out.points.push_back({p, std::move(pieces)});
    }
    return out;
}

BipartiteGraph bipartite_graph(const DigitSet& set) { return bipartite_graph(NeighborAutomaton(set)); }

bool verify_no_triple_points(const NeighborAutomaton& automaton) {
    const BipartiteGraph graph = bipartite_graph(automaton);
    return std::all_of(graph.points.begin(), graph.points.end(),
                       [](const BlackVertex& b) { return b.pieces.size() == 2; });
}

bool verify_no_triple_points(const DigitSet& set) { return verify_no_triple_points(NeighborAutomaton(set)); }

bool is_dendrite(const NeighborAutomaton& automaton) {
    require_one_point(automaton);
    if (!is_connected(automaton))
        throw Error(Errc::Disconnected, render_compact(automaton.digit_set()) + " is not connected");
    const BipartiteGraph bipartite = bipartite_graph(automaton);
    const bool by_bipartite = bipartite.is_tree();
    const bool no_triples = std::all_of(bipartite.points.begin(), bipartite.points.end(),
                                        [](const BlackVertex& b) { return b.pieces.size() == 2; });
    if (no_triples) {
        const bool by_simple = intersection_graph(automaton).is_tree();
        if (by_simple != by_bipartite)
            throw Error(Errc::InternalInconsistency,
                        "dendrite tests disagree for " + render_compact(automaton.digit_set()));
    }
    return by_bipartite;
}

bool is_dendrite(const DigitSet& set) { return is_dendrite(NeighborAutomaton(set)); }

namespace {

using Adjacency = std::array<std::uint16_t, kMaxGraphVertices>;

// Stable colour refinement seeded with degrees. Colours are ranks of
// (colour, sorted neighbour colours) signatures, so they are invariant under
// relabelling.
std::vector<int> refine(int n, const Adjacency& adj) {
    std::vector<int> colour(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) colour[v] = std::popcount(adj[v]);
    int classes = -1;
    while (true) {
        std::vector<std::pair<int, std::vector<int>>> signature(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            signature[v].first = colour[v];
            for (int w = 0; w < n; ++w)
                if (adj[v] >> w & 1U) signature[v].second.push_back(colour[w]);
            std::sort(signature[v].second.begin(), signature[v].second.end());
        }
        auto distinct = signature;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (int v = 0; v < n; ++v)
            colour[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), signature[v]) - distinct.begin());
        const int now = static_cast<int>(distinct.size());
        if (now == classes) break;
        classes = now;
    }
    return colour;
}

struct CodeSearch {
    int n = 0;
    const Adjacency* adj = nullptr;
    std::vector<std::vector<int>> cells; // vertices per colour, colours ascending
    std::vector<int> order;              // position -> vertex
    unsigned __int128 best = 0;
    bool have_best = false;

    unsigned __int128 encode() const {
        unsigned __int128 bits = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) bits = (bits << 1) | (((*adj)[order[a]] >> order[b]) & 1U);
        return bits;
    }

    void run(std::size_t cell) {
        if (cell == cells.size()) {
            const unsigned __int128 bits = encode();
            if (!have_best || bits < best) {
                best = bits;
                have_best = true;
            }
            return;
        }
        std::vector<int> members = cells[cell];
        std::sort(members.begin(), members.end());
        const std::size_t base = order.size();
        do {
            order.resize(base);
            order.insert(order.end(), members.begin(), members.end());
            run(cell + 1);
        } while (std::next_permutation(members.begin(), members.end()));
        order.resize(base);
    }
};

} // namespace

GraphCode graph_code(int vertices, std::span<const std::pair<int, int>> edges) {
    if (vertices > kMaxGraphVertices)
        throw Error(Errc::TooLarge, std::to_string(vertices) + " vertices exceed " + std::to_string(kMaxGraphVertices));
    if (vertices < 0) throw Error(Errc::InvalidArgument, "negative vertex count");
    Adjacency adj{};
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= vertices || b >= vertices || a == b)
            throw Error(Errc::InvalidArgument, "bad edge");
        adj[a] |= static_cast<std::uint16_t>(1U << b);
        adj[b] |= static_cast<std::uint16_t>(1U << a);
    }
    CodeSearch search;
    search.n = vertices;
    search.adj = &adj;
    const std::vector<int> colour = refine(vertices, adj);
    const int classes = vertices == 0 ? 0 : *std::max_element(colour.begin(), colour.end()) + 1;
    search.cells.resize(static_cast<std::size_t>(classes));
    for (int v = 0; v < vertices; ++v) search.cells[colour[v]].push_back(v);
    search.run(0);
    return {vertices, search.best};
}

GraphCode graph_code(const PieceGraph& graph) {
    const auto pairs = graph.pairs();
    return graph_code(graph.vertices, pairs);
}

int GraphCode::edge_count() const {
    return std::popcount(static_cast<std::uint64_t>(bits)) + std::popcount(static_cast<std::uint64_t>(bits >> 64));
}

std::vector<std::pair<int, int>> GraphCode::edges() const {
    std::vector<std::pair<int, int>> out;
    int remaining = vertices * (vertices - 1) / 2;
    for (int a = 0; a < vertices; ++a)
        for (int b = a + 1; b < vertices; ++b)
            if ((bits >> --remaining) & 1U) out.emplace_back(a, b);
    return out;
}

bool GraphCode::is_tree() const {
    PieceGraph g;
    g.vertices = vertices;
    for (const auto& [a, b] : edges()) g.edges.push_back({a, b, {}, {}});
    return g.is_tree();
}

std::string GraphCode::hex() const {
    static constexpr char kHex[] = "0123456789abcdef";
    const int pairs = vertices * (vertices - 1) / 2;
    const int digits = std::max(1, (pairs + 3) / 4);
    std::string out;
    out.push_back(kHex[(vertices >> 4) & 15]);
    out.push_back(kHex[vertices & 15]);
    for (int k = digits - 1; k >= 0; --k) out.push_back(kHex[static_cast<int>((bits >> (4 * k)) & 15U)]);
    return out;
}

GraphCode GraphCode::from_hex(std::string_view text) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw Error(Errc::ParseError, std::string("bad hex digit '") + c + "'");
    };
    if (text.size() < 3) throw Error(Errc::ParseError, "graph code too short");
    GraphCode code;
    code.vertices = nibble(text[0]) * 16 + nibble(text[1]);
    for (char c : text.substr(2)) code.bits = (code.bits << 4) | static_cast<unsigned>(nibble(c));
    if (code.hex() != text) throw Error(Errc::ParseError, "malformed graph code " + std::string(text));
    return code;
}

std::string to_dot(const BipartiteGraph& graph) {
    std::string out = "graph intersection {\n";
    for (int i = 0; i < graph.pieces; ++i) out += "  K" + std::to_string(i + 1) + " [shape=circle];\n";
    for (std::size_t k = 0; k < graph.points.size(); ++k)
        out += "  p" + std::to_string(k + 1) + " [shape=point, label=\"" + to_string(graph.points[k].point) + "\"];\n";
    for (std::size_t k = 0; k < graph.points.size(); ++k)
        for (int piece : graph.points[k].pieces)
            out += "  K" + std::to_string(piece + 1) + " -- p" + std::to_string(k + 1) + ";\n";
    return out + "}\n";
}

} // namespace fracube
