#include "fracube/core.hpp"
#include "fracube/faces.hpp"
#include "fracube/oracle.hpp"
#include "fracube/pipeline.hpp"
#include "fracube/topology.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace fracube;
using nlohmann::ordered_json;

namespace {

// Exit statuses.
constexpr int kMismatch = 1;   // verification mismatch, or --strict filter failure
constexpr int kBadInput = 2;   // unparseable digit string or reference table
constexpr int kFailure = 3;    // I/O, budget, internal errors

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    int order = kDefaultOrder;
    int pieces = 7;
    int workers = 1;
    int depth = 3;
    std::string format = "json";
    std::string out;
    std::string tables;
    std::string digits;
    bool strict = false;
    bool skip_oracle = false;
};

void write_output(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + opt.out + " for writing");
    file << text;
    if (!file.flush()) throw std::runtime_error("write to " + opt.out + " failed");
}

DigitSet parse_input(const Options& opt) {
    try {
        return parse_digitset(opt.digits, opt.order);
    } catch (const Error& e) {
        throw InputError("parse error in '" + opt.digits + "': " + e.what());
    }
}

std::vector<ReferenceEntry> load_tables(const Options& opt) {
    try {
        if (opt.tables.empty()) return bundled_reference_table();
        std::ifstream file(opt.tables, std::ios::binary);
        if (!file) throw std::runtime_error("cannot read " + opt.tables);
        std::stringstream buffer;
        buffer << file.rdbuf();
        return parse_reference_table(buffer.str(), opt.order);
    } catch (const Error& e) {
        throw InputError("reference table " + (opt.tables.empty() ? std::string("(bundled)") : opt.tables) + ": " +
                         e.what());
    }
}

bool tables_apply(const Options& opt) { return opt.order == kDefaultOrder && opt.pieces == 7; }

ordered_json point_json(const RationalPoint& p) { return {p[0].str(), p[1].str(), p[2].str()}; }

ordered_json offset_json(const Offset& o) { return {o.a, o.b, o.c}; }

int cmd_enumerate(const Options& opt) {
    ClassificationReport report = classify_all(opt.order, opt.pieces, opt.workers);
    if (tables_apply(opt)) {
        const auto entries = load_tables(opt);
        report = match_labels(std::move(report), table_heads(entries));
    }
    if (opt.format == "json") write_output(opt, to_json(report));
    else if (opt.format == "csv") write_output(opt, to_csv(report));
    else write_output(opt, to_markdown(report));
    return 0;
}

struct Inspection {
    DigitSet set;
    NeighborAutomaton automaton;
    bool connected = false;
    bool one_point = false;
    PieceGraph adjacency;
    std::optional<BipartiteGraph> bipartite;
    std::optional<bool> dendrite;
    CanonicalForm form;
    std::optional<GraphCode> code;
    std::optional<std::string> label;
};

Inspection inspect_set(const Options& opt, DigitSet set) {
    Inspection in{set, NeighborAutomaton(set), false, false, {}, {}, {}, canonical_form(set), {}, {}};
    in.connected = is_connected(in.automaton);
    in.one_point = has_one_point_property(in.automaton);
    in.adjacency = piece_adjacency(in.automaton);
    if (in.adjacency.vertices <= kMaxGraphVertices) in.code = graph_code(in.adjacency);
    if (in.one_point) in.bipartite = bipartite_graph(in.automaton);
    if (in.one_point && in.connected) in.dendrite = is_dendrite(in.automaton);
    if (in.one_point && in.connected && in.set.order() == kDefaultOrder && in.set.size() == 7) {
        Options table_opt = opt;
        table_opt.order = kDefaultOrder;
        for (const ReferenceEntry& head : table_heads(load_tables(table_opt))) {
            if (graph_code(intersection_graph(head.set)) == *in.code) {
                in.label = head.label;
                break;
            }
        }
    }
    return in;
}

// The black vertex shared by pieces i and j (0-based), if any.
const BlackVertex* shared_point(const Inspection& in, int i, int j) {
    if (!in.bipartite) return nullptr;
    for (const BlackVertex& b : in.bipartite->points) {
        const auto& p = b.pieces;
        if (std::find(p.begin(), p.end(), i) != p.end() && std::find(p.begin(), p.end(), j) != p.end()) return &b;
    }
    return nullptr;
}

std::string inspect_json(const Inspection& in) {
    ordered_json j;
    j["digits"] = render_compact(in.set);
    j["order"] = in.set.order();
    j["pieces"] = in.set.size();
    j["connected"] = in.connected;
    j["one_point"] = in.one_point;
    j["faces"] = ordered_json::array();
    for (const Offset& alpha : all_offsets()) {
        const FaceClass face = in.automaton.face_class(alpha);
        ordered_json f;
        f["offset"] = offset_json(alpha);
        f["class"] = std::string(to_string(face.kind));
        if (face.point) f["point"] = point_json(face.point->value);
        j["faces"].push_back(f);
    }
    j["edges"] = ordered_json::array();
    for (const PieceEdge& e : in.adjacency.edges) {
        ordered_json edge;
        edge["pieces"] = {e.i + 1, e.j + 1};
        edge["offset"] = offset_json(e.alpha);
        edge["class"] = std::string(to_string(e.face.kind));
        if (const BlackVertex* b = shared_point(in, e.i, e.j)) edge["point"] = point_json(b->point);
        j["edges"].push_back(edge);
    }
    if (in.bipartite) {
        j["black_points"] = ordered_json::array();
        for (const BlackVertex& b : in.bipartite->points) {
            std::vector<int> pieces;
            for (int p : b.pieces) pieces.push_back(p + 1);
            j["black_points"].push_back({{"point", point_json(b.point)}, {"pieces", pieces}});
        }
    } else {
        j["black_points"] = nullptr;
    }
    j["dendrite"] = in.dendrite ? ordered_json(*in.dendrite) : ordered_json(nullptr);
    j["canonical"] = render_compact(in.form.canonical);
    j["orbit_size"] = in.form.orbit_size;
    j["stabilizer_size"] = in.form.stabilizer_size;
    j["graph_code"] = in.code ? ordered_json(in.code->hex()) : ordered_json(nullptr);
    j["label"] = in.label ? ordered_json(*in.label) : ordered_json(nullptr);
    return j.dump(2) + "\n";
}

std::string yes_no(bool v) { return v ? "true" : "false"; }

std::string inspect_markdown(const Inspection& in) {
    std::ostringstream out;
    out << "# " << render_compact(in.set) << "\n\n";
    out << "| property | value |\n|---|---|\n";
    out << "| order | " << in.set.order() << " |\n";
    out << "| pieces | " << in.set.size() << " |\n";
    out << "| connected | " << yes_no(in.connected) << " |\n";
    out << "| one_point | " << yes_no(in.one_point) << " |\n";
    out << "| dendrite | " << (in.dendrite ? yes_no(*in.dendrite) : "n/a") << " |\n";
    out << "| canonical | " << render_compact(in.form.canonical) << " |\n";
    out << "| orbit_size | " << in.form.orbit_size << " |\n";
    out << "| graph_code | " << (in.code ? in.code->hex() : "n/a") << " |\n";
    out << "| label | " << (in.label ? *in.label : "none") << " |\n\n";

    out << "## Faces\n\n| offset | class | point |\n|---|---|---|\n";
    for (const Offset& alpha : all_offsets()) {
        const FaceClass face = in.automaton.face_class(alpha);
        out << "| " << to_string(alpha) << " | " << to_string(face.kind) << " | "
            << (face.point ? to_string(face.point->value) : "") << " |\n";
    }
    out << "\n## Edges\n\n| pieces | offset | class | point |\n|---|---|---|---|\n";
    for (const PieceEdge& e : in.adjacency.edges) {
        const BlackVertex* b = shared_point(in, e.i, e.j);
        out << "| K" << e.i + 1 << " K" << e.j + 1 << " | " << to_string(e.alpha) << " | "
            << to_string(e.face.kind) << " | " << (b ? to_string(b->point) : "") << " |\n";
    }
    if (in.bipartite) {
        out << "\n## Intersection points\n\n| point | pieces |\n|---|---|\n";
        for (const BlackVertex& b : in.bipartite->points) {
            out << "| " << to_string(b.point) << " |";
            for (int p : b.pieces) out << " K" << p + 1;
            out << " |\n";
        }
    }
    out << "\n## Neighbor automaton\n\n```\n" << in.automaton.dump() << "```\n";
    return out.str();
}

int cmd_inspect(const Options& opt) {
    const Inspection in = inspect_set(opt, parse_input(opt));
    if (opt.format == "json") write_output(opt, inspect_json(in));
    else if (opt.format == "md") write_output(opt, inspect_markdown(in));
    else {
        if (!in.bipartite) throw Error(Errc::OnePointViolation, "no intersection graph without the one-point property");
        write_output(opt, to_dot(*in.bipartite));
    }
    if (opt.strict && !(in.connected && in.one_point)) {
        std::cerr << "fracube: " << render_compact(in.set) << " fails "
                  << (!in.connected ? "connectivity" : "the one-point property") << "\n";
        return kMismatch;
    }
    return 0;
}

int cmd_verify(const Options& opt) {
    Options table_opt = opt;
    table_opt.order = kDefaultOrder;
    const auto entries = load_tables(table_opt);
    ClassificationReport report = classify_all(kDefaultOrder, 7, opt.workers);
    report = match_labels(std::move(report), table_heads(entries));
    const VerificationSummary summary = verify_against_tables(report, entries);
    for (const std::string& m : summary.mismatches) std::cerr << "mismatch: " << m << "\n";

    std::ostringstream out;
    out << summary.matched << "/" << summary.entries << " matched";
    bool ok = summary.ok();
    if (!opt.skip_oracle) {
        std::vector<DigitSet> sets;
        for (const ReferenceEntry& e : entries) sets.push_back(e.set);
        const OracleSweep sweep = oracle_sweep(sets, opt.depth, opt.workers);
        for (const std::string& d : sweep.disagreements) std::cerr << "oracle: " << d << "\n";
        out << ", " << sweep.agreed << " face checks agreed";
        if (sweep.agreed != sweep.checks) out << " of " << sweep.checks;
        ok = ok && sweep.ok();
    }
    out << "\n";
    out << "tables cover " << summary.distinct_classes << " of " << report.classes.size() << " classes\n";
    write_output(opt, out.str());
    return ok ? 0 : kMismatch;
}

int cmd_export(const Options& opt) {
    const VoxelSet voxels = voxelize(parse_input(opt), opt.depth);
    if (opt.format == "cells") write_output(opt, to_cells_text(voxels));
    else if (opt.format == "obj") write_output(opt, to_obj(voxels));
    else write_output(opt, to_cells_json(voxels));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractal cubes: enumeration, inspection, verification and voxel export"};
    app.require_subcommand(1);
    Options opt;

    auto add_order = [&](CLI::App* cmd) {
        cmd->add_option("--order", opt.order, "Subdivision order n")->check(CLI::Range(kMinOrder, kMaxOrder));
    };
    auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", opt.out, "Output file (default stdout)"); };
    auto add_tables = [&](CLI::App* cmd) {
        cmd->add_option("--tables", opt.tables, "Reference table file (default: bundled)");
    };
    auto add_workers = [&](CLI::App* cmd) {
        cmd->add_option("--workers", opt.workers, "Worker threads")->check(CLI::Range(1, 256));
    };

    auto* enumerate = app.add_subcommand("enumerate", "Classify every digit set of the given size");
    add_order(enumerate);
    enumerate->add_option("--pieces", opt.pieces, "Digits per set")->check(CLI::Range(1, 125));
    add_workers(enumerate);
    enumerate->add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv", "md"}));
    add_out(enumerate);
    add_tables(enumerate);

    auto* inspect = app.add_subcommand("inspect", "Report faces, intersection graph and class of one digit set");
    inspect->add_option("digits", opt.digits, "Digit string, e.g. 020_101_110_111_112_121_202")->required();
    add_order(inspect);
    inspect->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "md", "dot"}));
    inspect->add_flag("--strict", opt.strict, "Exit nonzero unless connected with the one-point property");
    add_out(inspect);
    add_tables(inspect);

    auto* verify = app.add_subcommand("verify", "Check the reference tables against the enumeration");
    add_workers(verify);
    verify->add_flag("--skip-oracle", opt.skip_oracle, "Only match the tables");
    auto* verify_depth = verify->add_option("--depth", opt.depth, "Voxel depth of the emptiness oracle");
    verify_depth->check(CLI::Range(1, 12));
    add_out(verify);
    add_tables(verify);

    auto* exporter = app.add_subcommand("export", "Write the voxel approximation of an attractor");
    exporter->add_option("digits", opt.digits, "Digit string")->required();
    add_order(exporter);
    exporter->add_option("--depth", opt.depth, "Subdivision depth")->check(CLI::Range(1, 20));
    exporter->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"cells", "obj", "json"}));
    add_out(exporter);

    // Per-command defaults that differ from the shared ones.
    verify->preparse_callback([&](std::size_t) { opt.depth = 6; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (enumerate->parsed()) return cmd_enumerate(opt);
        if (inspect->parsed()) return cmd_inspect(opt);
        if (verify->parsed()) return cmd_verify(opt);
        return cmd_export(opt);
    } catch (const InputError& e) {
        std::cerr << "fracube: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "fracube: " << e.what() << "\n";
        return kFailure;
    }
}
