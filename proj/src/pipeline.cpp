#include "fracube/pipeline.hpp"

#include "json.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace fracube {

std::uint64_t rank_combination(std::span<const int> cells) {
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) rank += binomial(cells[i], static_cast<int>(i) + 1);
    return rank;
}

std::vector<int> unrank_combination(std::uint64_t rank, int size) {
    std::vector<int> cells(static_cast<std::size_t>(size));
    for (int i = size - 1; i >= 0; --i) {
        int c = i;
        while (binomial(c + 1, i + 1) <= rank) ++c;
        cells[static_cast<std::size_t>(i)] = c;
        rank -= binomial(c, i + 1);
    }
    return cells;
}

bool next_combination(std::vector<int>& cells, int universe) {
    const std::size_t k = cells.size();
    for (std::size_t i = 0; i < k; ++i) {
        const int limit = i + 1 < k ? cells[i + 1] : universe;
        if (cells[i] + 1 < limit) {
            ++cells[i];
            for (std::size_t j = 0; j < i; ++j) cells[j] = static_cast<int>(j);
            return true;
        }
    }
    return false;
}

namespace {

int cell_count(int order, int pieces) {
    checked_order(order);
    const int cells = order * order * order;
    if (pieces < 1 || pieces > cells)
        throw Error(Errc::InvalidArgument, "piece count " + std::to_string(pieces) + " outside [1," +
                                               std::to_string(cells) + "]");
    return cells;
}

} // namespace

void enumerate_range(int order, int pieces, std::uint64_t begin, std::uint64_t end,
                     const std::function<void(const DigitSet&)>& visit) {
    const int cells = cell_count(order, pieces);
    end = std::min(end, binomial(cells, pieces));
    if (begin >= end) return;
    std::vector<int> combination = unrank_combination(begin, pieces);
    std::vector<Digit> digits(static_cast<std::size_t>(pieces));
    for (std::uint64_t rank = begin; rank < end; ++rank) {
        for (int i = 0; i < pieces; ++i) digits[i] = digit_at(combination[i], order);
        visit(DigitSet(order, digits));
        if (!next_combination(combination, cells)) break;
    }
}

std::uint64_t enumerate_all(int order, int pieces, const std::function<void(const DigitSet&)>& visit) {
    const std::uint64_t total = binomial(cell_count(order, pieces), pieces);
    std::uint64_t visited = 0;
    enumerate_range(order, pieces, 0, total, [&](const DigitSet& set) {
        ++visited;
        visit(set);
    });
    return visited;
}

bool passes_filters(const NeighborAutomaton& automaton) {
    return is_connected(automaton) && has_one_point_property(automaton);
}

const ClassRecord* ClassificationReport::find_class(const DigitSet& canonical) const {
    auto it = std::lower_bound(classes.begin(), classes.end(), canonical.code(),
                               [](const ClassRecord& r, CellCode c) { return r.canonical.code() < c; });
    if (it == classes.end() || !(it->canonical == canonical)) return nullptr;
    return &*it;
}

const GraphType* ClassificationReport::find_type(const GraphCode& code) const {
    for (const GraphType& t : graph_types)
        if (t.graph == code) return &t;
    return nullptr;
}

namespace {

void sort_types(std::vector<GraphType>& types, const std::vector<std::string>& label_order) {
    auto label_rank = [&](const GraphType& t) -> std::size_t {
        if (!t.label) return label_order.size();
        auto it = std::find(label_order.begin(), label_order.end(), *t.label);
        return static_cast<std::size_t>(it - label_order.begin());
    };
    std::stable_sort(types.begin(), types.end(), [&](const GraphType& a, const GraphType& b) {
        const auto ra = label_rank(a);
        const auto rb = label_rank(b);
        if (ra != rb) return ra < rb;
        if (a.dendrite != b.dendrite) return a.dendrite;
        return a.graph < b.graph;
    });
}

} // namespace

ClassificationReport classify_all(int order, int pieces, int workers) {
    const int cells = cell_count(order, pieces);
    workers = std::max(1, workers);
    ClassificationReport report;
    report.order = order;
    report.pieces = pieces;
    report.candidates = binomial(cells, pieces);

    // Worker w owns the contiguous colex range [w*T/W, (w+1)*T/W); colex order
    // is increasing code order, so concatenation keeps survivors sorted.
    std::vector<std::vector<CellCode>> found(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    const auto total = report.candidates;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const auto begin = total * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
                const auto end = total * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(workers);
                enumerate_range(order, pieces, begin, end, [&](const DigitSet& set) {
                    if (passes_filters(NeighborAutomaton(set))) found[w].push_back(set.code());
                });
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::map<CellCode, int> orbit_members;
    for (const auto& part : found) {
        report.survivors += part.size();
        for (CellCode code : part)
            ++orbit_members[canonical_form(DigitSet::from_code(code, order)).canonical.code()];
    }

    std::map<GraphCode, GraphType> types;
    std::uint64_t covered = 0;
    for (const auto& [code, members] : orbit_members) {
        ClassRecord record;
        record.canonical = DigitSet::from_code(code, order);
        const CanonicalForm form = canonical_form(record.canonical);
        if (form.orbit_size != members)
            throw Error(Errc::InternalInconsistency, "orbit of " + render_compact(record.canonical) + " has " +
                                                         std::to_string(form.orbit_size) + " members but " +
                                                         std::to_string(members) + " survived");
        record.orbit_size = form.orbit_size;
        covered += static_cast<std::uint64_t>(members);
        const NeighborAutomaton automaton(record.canonical);
        const PieceGraph graph = intersection_graph(automaton);
        record.graph = graph_code(graph);
        record.edges = static_cast<int>(graph.edges.size());
        record.dendrite = is_dendrite(automaton);
        if (verify_no_triple_points(automaton) && record.dendrite != record.graph.is_tree())
            throw Error(Errc::InternalInconsistency, "dendrite flag disagrees with graph for " +
                                                         render_compact(record.canonical));
        GraphType& type = types[record.graph];
        type.graph = record.graph;
        type.dendrite = record.dendrite;
        ++type.multiplicity;
        report.classes.push_back(std::move(record));
    }
    if (covered != report.survivors)
        throw Error(Errc::InternalInconsistency, "orbit sizes do not add up to the survivor count");
    for (auto& [code, type] : types) report.graph_types.push_back(type);
    sort_types(report.graph_types, {});
    return report;
}

bool ReferenceEntry::dendrite_table() const { return label.rfind("nonden", 0) != 0; }

std::vector<ReferenceEntry> parse_reference_table(std::string_view text, int order) {
    std::vector<ReferenceEntry> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        ReferenceEntry entry;
        std::string digits;
        std::string extra;
        if (!(fields >> entry.label >> entry.listing_id >> digits) || (fields >> extra))
            throw Error(Errc::ParseError, "line " + std::to_string(line_number) + ": expected 'label id digits'");
        try {
            entry.set = parse_digitset(digits, order);
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_number) + " (" + entry.label + " " +
                                      entry.listing_id + "): " + e.what());
        }
        CellCode listing = 0;
        for (const Digit& d : entry.set.digits()) listing |= cell_bit(order * order * d.x + order * d.y + d.z);
        if (to_decimal(listing) != entry.listing_id)
            throw Error(Errc::ParseError, "line " + std::to_string(line_number) + " (" + entry.label + " " +
                                              entry.listing_id + "): listing id does not match digits " + digits);
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<ReferenceEntry> bundled_reference_table() { return parse_reference_table(bundled_reference_text()); }

std::vector<ReferenceEntry> table_heads(std::span<const ReferenceEntry> entries) {
    std::vector<ReferenceEntry> heads;
    std::set<std::string> seen;
    for (const ReferenceEntry& entry : entries)
        if (seen.insert(entry.label).second) heads.push_back(entry);
    return heads;
}

ClassificationReport match_labels(ClassificationReport report, std::span<const ReferenceEntry> entries) {
    std::map<GraphCode, std::string> label_of;
    std::map<std::string, GraphCode> code_of;
    std::vector<std::string> order;
    for (const ReferenceEntry& entry : entries) {
        const GraphCode code = graph_code(intersection_graph(NeighborAutomaton(entry.set)));
        if (auto it = code_of.find(entry.label); it != code_of.end() && it->second != code)
            throw Error(Errc::LabelConflict, "label " + entry.label + " maps to graphs " + it->second.hex() +
                                                 " and " + code.hex());
        if (auto it = label_of.find(code); it != label_of.end() && it->second != entry.label)
            throw Error(Errc::LabelConflict, "graph " + code.hex() + " labelled both " + it->second + " and " +
                                                 entry.label);
        if (code_of.emplace(entry.label, code).second) order.push_back(entry.label);
        label_of.emplace(code, entry.label);
    }
    for (const auto& [code, label] : label_of) {
        auto it = std::find_if(report.graph_types.begin(), report.graph_types.end(),
                               [&](const GraphType& t) { return t.graph == code; });
        if (it == report.graph_types.end())
            throw Error(Errc::UnknownCode, "label " + label + " names graph " + code.hex() + " absent from the report");
        it->label = label;
    }
    for (ClassRecord& record : report.classes) {
        if (auto it = label_of.find(record.graph); it != label_of.end()) record.label = it->second;
    }
    sort_types(report.graph_types, order);
    return report;
}

VerificationSummary verify_against_tables(const ClassificationReport& report, std::span<const ReferenceEntry> entries) {
    VerificationSummary summary;
    summary.entries = entries.size();
    std::map<std::string, GraphCode> table_code;
    for (const GraphType& t : report.graph_types)
        if (t.label) table_code.emplace(*t.label, t.graph);
    std::set<CellCode> classes;
    for (const ReferenceEntry& entry : entries) {
        const std::string who = entry.label + " " + entry.listing_id + " " + render_compact(entry.set);
        auto fail = [&](const std::string& why) { summary.mismatches.push_back(who + ": " + why); };
        const NeighborAutomaton automaton(entry.set);
        if (!is_connected(automaton)) {
            fail("not connected");
            continue;
        }
        if (!has_one_point_property(automaton)) {
            fail("fails the one-point property");
            continue;
        }
        const CanonicalForm form = canonical_form(entry.set);
        const ClassRecord* record = report.find_class(form.canonical);
        if (record == nullptr) {
            fail("canonical form " + render_compact(form.canonical) + " not in the report");
            continue;
        }
        classes.insert(form.canonical.code());
        const GraphCode code = graph_code(intersection_graph(automaton));
        const GraphCode& expected = table_code.emplace(entry.label, code).first->second;
        if (code != expected) {
            fail("graph " + code.hex() + " differs from table graph " + expected.hex());
            continue;
        }
        if (record->graph != code) {
            fail("graph " + code.hex() + " differs from its class graph " + record->graph.hex());
            continue;
        }
        if (is_dendrite(automaton) != entry.dendrite_table()) {
            fail(entry.dendrite_table() ? "not a dendrite" : "unexpectedly a dendrite");
            continue;
        }
        if (!verify_no_triple_points(automaton)) {
            fail("has a triple point");
            continue;
        }
        ++summary.matched;
    }
    summary.distinct_classes = classes.size();
    return summary;
}

std::string to_json(const ClassificationReport& report) {
    nlohmann::ordered_json j;
    j["meta"] = {{"order", report.order},
                 {"pieces", report.pieces},
                 {"candidates", report.candidates},
                 {"survivors", report.survivors},
                 {"classes", report.classes.size()}};
    j["classes"] = nlohmann::ordered_json::array();
    for (const ClassRecord& r : report.classes) {
        nlohmann::ordered_json c;
        c["canonical"] = render_compact(r.canonical);
        c["orbit_size"] = r.orbit_size;
        c["graph_code"] = r.graph.hex();
        c["dendrite"] = r.dendrite;
        c["edges"] = r.edges;
        if (r.label) c["label"] = *r.label;
        j["classes"].push_back(std::move(c));
    }
    j["graph_types"] = nlohmann::ordered_json::array();
    for (const GraphType& t : report.graph_types) {
        nlohmann::ordered_json g;
        g["graph_code"] = t.graph.hex();
        if (t.label) g["label"] = *t.label;
        g["dendrite"] = t.dendrite;
        g["multiplicity"] = t.multiplicity;
        j["graph_types"].push_back(std::move(g));
    }
    return j.dump(2) + "\n";
}

std::string to_csv(const ClassificationReport& report) {
    std::string out = "canonical,orbit_size,graph_code,dendrite,edges,label\n";
    for (const ClassRecord& r : report.classes) {
        out += render_compact(r.canonical) + "," + std::to_string(r.orbit_size) + "," + r.graph.hex() + "," +
               (r.dendrite ? "true" : "false") + "," + std::to_string(r.edges) + "," + r.label.value_or("") + "\n";
    }
    return out;
}

namespace {

std::string type_block(const std::vector<const GraphType*>& types) {
    if (types.empty()) return "(none)\n";
    std::string header = "|";
    std::string rule = "|";
    std::string counts = "|";
    for (const GraphType* t : types) {
        header += " " + t->label.value_or(t->graph.hex()) + " |";
        rule += "---|";
        counts += " N=" + std::to_string(t->multiplicity) + " |";
    }
    return header + "\n" + rule + "\n" + counts + "\n";
}

} // namespace

std::string to_markdown(const ClassificationReport& report) {
    std::string out = "# Fractal cubes of order " + std::to_string(report.order) + " with " +
                      std::to_string(report.pieces) + " pieces\n\n";
    out += "| candidates | connected, one-point | isometry classes | graph types |\n";
    out += "|---|---|---|---|\n";
    out += "| " + std::to_string(report.candidates) + " | " + std::to_string(report.survivors) + " | " +
           std::to_string(report.classes.size()) + " | " + std::to_string(report.graph_types.size()) + " |\n\n";
    std::vector<const GraphType*> dendrites;
    std::vector<const GraphType*> others;
    for (const GraphType& t : report.graph_types) (t.dendrite ? dendrites : others).push_back(&t);
    out += "## Dendrites\n\n" + type_block(dendrites) + "\n";
    out += "## Non dendrites\n\n" + type_block(others) + "\n";
    out += "## Classes\n\n| # | canonical | orbit | graph | label | dendrite | edges |\n|---|---|---|---|---|---|---|\n";
    int row = 0;
    for (const ClassRecord& r : report.classes) {
        out += "| " + std::to_string(++row) + " | " + render_compact(r.canonical) + " | " +
               std::to_string(r.orbit_size) + " | " + r.graph.hex() + " | " + r.label.value_or("") + " | " +
               (r.dendrite ? "yes" : "no") + " | " + std::to_string(r.edges) + " |\n";
    }
    return out;
}

} // namespace fracube
