#include "fracube/oracle.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

namespace fracube {

namespace {

constexpr std::int64_t kMaxSide = std::int64_t{1} << 20;

std::int64_t pack(const std::array<std::int64_t, 3>& c, std::int64_t side) {
    return c[0] + side * (c[1] + side * c[2]);
}

} // namespace

std::int64_t VoxelSet::side() const {
    std::int64_t s = 1;
    for (int k = 0; k < depth; ++k) s *= order;
    return s;
}

bool VoxelSet::contains(const std::array<std::int64_t, 3>& cell) const {
    const std::int64_t s = side();
    for (auto v : cell)
        if (v < 0 || v >= s) return false;
    const std::int64_t key = pack(cell, s);
    auto it = std::lower_bound(cells.begin(), cells.end(), key,
                               [s](const auto& c, std::int64_t k) { return pack(c, s) < k; });
    return it != cells.end() && pack(*it, s) == key;
}

VoxelSet voxelize(const DigitSet& set, int depth, std::size_t budget) {
    if (depth < 1) throw Error(Errc::InvalidArgument, "voxel depth must be at least 1");
    const int n = set.order();
    std::size_t count = 1;
    std::int64_t side = 1;
    for (int k = 0; k < depth; ++k) {
        count *= set.size();
        side *= n;
        if (count > budget || side > kMaxSide)
            throw Error(Errc::BudgetExceeded, "depth " + std::to_string(depth) + " exceeds the voxel budget");
    }
    VoxelSet out;
    out.order = n;
    out.depth = depth;
    out.cells.push_back({0, 0, 0});
    for (int k = 0; k < depth; ++k) {
        std::vector<std::array<std::int64_t, 3>> next;
        next.reserve(out.cells.size() * set.size());
        for (const auto& c : out.cells)
            for (const Digit& d : set.digits()) next.push_back({n * c[0] + d.x, n * c[1] + d.y, n * c[2] + d.z});
        out.cells = std::move(next);
    }
    std::sort(out.cells.begin(), out.cells.end(),
              [side](const auto& a, const auto& b) { return pack(a, side) < pack(b, side); });
    return out;
}

std::string_view to_string(EmptinessVerdict v) {
    return v == EmptinessVerdict::CertifiedEmpty ? "CertifiedEmpty" : "Unknown";
}

EmptinessVerdict oracle_face_empty(const VoxelSet& voxels, const Offset& alpha) {
    const std::int64_t side = voxels.side();
    // Only cells on the far side of the face can touch their shifted partner.
    for (const auto& c : voxels.cells) {
        bool candidate = true;
        for (int axis = 0; axis < 3 && candidate; ++axis) {
            if (alpha[axis] == 1) candidate = c[axis] == 0;
            if (alpha[axis] == -1) candidate = c[axis] == side - 1;
        }
        if (!candidate) continue;
        const std::array<std::int64_t, 3> shifted{c[0] + side * alpha.a, c[1] + side * alpha.b, c[2] + side * alpha.c};
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (voxels.contains({shifted[0] + dx, shifted[1] + dy, shifted[2] + dz}))
                        return EmptinessVerdict::Unknown;
    }
    return EmptinessVerdict::CertifiedEmpty;
}

EmptinessVerdict oracle_face_empty(const DigitSet& set, const Offset& alpha, int depth) {
    return oracle_face_empty(voxelize(set, depth), alpha);
}

std::string_view to_string(Cardinality c) {
    switch (c) {
    case Cardinality::Empty: return "Empty";
    case Cardinality::One: return "One";
    case Cardinality::AtLeastTwo: return "AtLeastTwo";
    }
    return "?";
}

Cardinality to_cardinality(FaceKind kind) {
    switch (kind) {
    case FaceKind::Empty: return Cardinality::Empty;
    case FaceKind::Point: return Cardinality::One;
    case FaceKind::Multi: return Cardinality::AtLeastTwo;
    }
    return Cardinality::Empty;
}

// A live prefix of length m is a pair (P, u): P = Σ d_k n^(m-k) over the first
// labels, u the current offset. Its points are (P + y)/n^m with y ∈ F_u, so
// two live prefixes with |P - P'| >= 2 on some axis give distinct points, and
// a single point keeps every level within a 2x2x2 box.
Cardinality oracle_face_cardinality(const DigitSet& set, const Offset& alpha, int max_depth) {
    if (alpha.is_zero()) throw Error(Errc::InvalidArgument, "zero offset");
    const int n = set.order();
    const auto digits = set.digits();

    struct Step {
        int target;
        Digit first;
    };
    std::array<std::vector<Step>, Offset::kSlots> successors;
    for (const Offset& u : all_offsets()) {
        for (const Digit& d : digits) {
            for (const Digit& e : digits) {
                const int vx = n * u.a + e.x - d.x;
                const int vy = n * u.b + e.y - d.y;
                const int vz = n * u.c + e.z - d.z;
                if (std::abs(vx) > 1 || std::abs(vy) > 1 || std::abs(vz) > 1) continue;
                successors[u.slot()].push_back({Offset{vx, vy, vz}.slot(), d});
            }
        }
    }

    // A path of 26 steps on 26 vertices repeats a vertex, hence continues forever.
    std::array<bool, Offset::kSlots> reach{};
    for (const Offset& u : all_offsets()) reach[u.slot()] = true;
    for (int step = 0; step < 26; ++step) {
        std::array<bool, Offset::kSlots> next{};
        for (const Offset& u : all_offsets())
            for (const Step& s : successors[u.slot()]) next[u.slot()] = next[u.slot()] || reach[s.target];
        reach = next;
    }
    if (!reach[alpha.slot()]) return Cardinality::Empty;

    using Prefix = std::array<std::int64_t, 4>; // x, y, z, vertex
    std::vector<Prefix> frontier{{0, 0, 0, alpha.slot()}};
    std::set<std::vector<Prefix>> seen{frontier};
    for (int level = 1; level <= max_depth; ++level) {
        std::vector<Prefix> next;
        for (const Prefix& p : frontier) {
            for (const Step& s : successors[static_cast<std::size_t>(p[3])]) {
                if (!reach[s.target]) continue;
                next.push_back({n * p[0] + s.first.x, n * p[1] + s.first.y, n * p[2] + s.first.z, s.target});
            }
        }
        for (int axis = 0; axis < 3; ++axis) {
            auto [lo, hi] = std::minmax_element(next.begin(), next.end(),
                                                [axis](const Prefix& a, const Prefix& b) { return a[axis] < b[axis]; });
            const std::int64_t low = (*lo)[axis];
            if ((*hi)[axis] - low >= 2) return Cardinality::AtLeastTwo;
            for (Prefix& p : next) p[axis] -= low;
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (!seen.insert(next).second) return Cardinality::One;
        frontier = std::move(next);
    }
    throw Error(Errc::DepthTooSmall, "prefix frontier still changing after " + std::to_string(max_depth) + " levels");
}

OracleSweep oracle_sweep(std::span<const DigitSet> sets, int voxel_depth, int workers) {
    workers = std::max(1, workers);
    std::vector<OracleSweep> partial(sets.size());
    auto check = [&](std::size_t k) {
        const DigitSet& set = sets[k];
        OracleSweep& out = partial[k];
        const NeighborAutomaton automaton(set);
        const VoxelSet voxels = voxelize(set, voxel_depth);
        for (const Offset& alpha : all_offsets()) {
            ++out.checks;
            const FaceKind exact = automaton.classify(alpha);
            const std::string where = render_compact(set) + " " + to_string(alpha);
            Cardinality brute{};
            try {
                brute = oracle_face_cardinality(set, alpha);
            } catch (const Error& e) {
                out.disagreements.push_back(where + ": " + e.what());
                continue;
            }
            if (brute != to_cardinality(exact)) {
                out.disagreements.push_back(where + ": exact " + std::string(to_string(exact)) + " vs oracle " +
                                            std::string(to_string(brute)));
                continue;
            }
            if (oracle_face_empty(voxels, alpha) == EmptinessVerdict::CertifiedEmpty && exact != FaceKind::Empty) {
                out.disagreements.push_back(where + ": voxel-certified empty but exact " + std::string(to_string(exact)));
                continue;
            }
            ++out.agreed;
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t k = static_cast<std::size_t>(w); k < sets.size(); k += static_cast<std::size_t>(workers))
                check(k);
        });
    for (auto& t : pool) t.join();
    OracleSweep total;
    for (OracleSweep& p : partial) {
        total.checks += p.checks;
        total.agreed += p.agreed;
        for (auto& d : p.disagreements) total.disagreements.push_back(std::move(d));
    }
    return total;
}

std::string to_cells_text(const VoxelSet& voxels) {
    std::string out;
    for (const auto& c : voxels.cells)
        out += std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]) + "\n";
    return out;
}

std::string to_obj(const VoxelSet& voxels) {
    const std::int64_t side = voxels.side();
    const std::int64_t corner_side = side + 1;
    std::map<std::int64_t, std::size_t> vertex_index;
    std::vector<std::array<std::int64_t, 3>> vertices;
    std::vector<std::array<std::size_t, 3>> triangles;
    auto vertex = [&](const std::array<std::int64_t, 3>& p) {
        const std::int64_t key = p[0] + corner_side * (p[1] + corner_side * p[2]);
        auto [it, inserted] = vertex_index.emplace(key, vertices.size() + 1);
        if (inserted) vertices.push_back(p);
        return it->second;
    };
    for (const auto& c : voxels.cells) {
        for (int axis = 0; axis < 3; ++axis) {
            for (int sign : {1, -1}) {
                auto neighbour = c;
                neighbour[axis] += sign;
                if (voxels.contains(neighbour)) continue;
                const int b = (axis + 1) % 3;
                const int d = (axis + 2) % 3;
                // Counter-clockwise seen from outside: (b,d) = (0,0),(1,0),(1,1),(0,1) faces +axis.
                std::array<std::array<int, 2>, 4> quad{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
                if (sign < 0) std::reverse(quad.begin(), quad.end());
                std::array<std::size_t, 4> ids{};
                for (int k = 0; k < 4; ++k) {
                    auto p = c;
                    if (sign > 0) p[axis] += 1;
                    p[b] += quad[k][0];
                    p[d] += quad[k][1];
                    ids[k] = vertex(p);
                }
                triangles.push_back({ids[0], ids[1], ids[2]});
                triangles.push_back({ids[0], ids[2], ids[3]});
            }
        }
    }
    std::string out = "# voxel approximation: order " + std::to_string(voxels.order) + ", depth " +
                      std::to_string(voxels.depth) + ", " + std::to_string(voxels.cells.size()) + " cells\n";
    char buffer[96];
    const double scale = 1.0 / static_cast<double>(side);
    for (const auto& v : vertices) {
        std::snprintf(buffer, sizeof buffer, "v %.10g %.10g %.10g\n", v[0] * scale, v[1] * scale, v[2] * scale);
        out += buffer;
    }
    for (const auto& t : triangles)
        out += "f " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
    return out;
}

std::string to_cells_json(const VoxelSet& voxels) {
    nlohmann::ordered_json j;
    j["order"] = voxels.order;
    j["depth"] = voxels.depth;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : voxels.cells) j["cells"].push_back({c[0], c[1], c[2]});
    return j.dump() + "\n";
}

} // namespace fracube
