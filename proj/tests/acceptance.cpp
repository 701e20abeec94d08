// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "fracube/core.hpp"
#include "fracube/faces.hpp"
#include "fracube/oracle.hpp"
#include "fracube/pipeline.hpp"
#include "fracube/topology.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace fracube;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string join(const std::multiset<int>& values) {
    std::string out = "{";
    for (int v : values) out += (out.size() > 1 ? ", " : "") + std::to_string(v);
    return out + "}";
}

// C(27, 7) from the product formula, independent of the library's binomial.
std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

RationalPoint act(const Isometry& g, const RationalPoint& p) {
    RationalPoint out;
    for (int i = 0; i < 3; ++i) {
        const Rational& v = p[g.perm[static_cast<std::size_t>(i)]];
        out[static_cast<std::size_t>(i)] = g.flipped(i) ? Rational(1) - v : v;
    }
    return out;
}

} // namespace

int main() {
    const std::vector<ReferenceEntry> entries = bundled_reference_table();
    std::vector<DigitSet> sets;
    for (const ReferenceEntry& e : entries) sets.push_back(e.set);
    const int hardware = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));

    // 1. Candidate count.
    {
        const auto start = Clock::now();
        const std::uint64_t count = enumerate_all(3, 7, [](const DigitSet&) {});
        const double took = seconds_since(start);
        const std::uint64_t expected = choose(27, 7);
        std::ostringstream detail;
        detail << count << " sets, C(27,7) = " << expected << ", " << took << " s";
        report(1, "candidate count 888030", count == 888030 && count == expected && took < 1.0, detail.str());
    }

    // 2. Survivors, single worker.
    const auto start = Clock::now();
    const ClassificationReport single = classify_all(3, 7, 1);
    const double single_time = seconds_since(start);
    {
        std::ostringstream detail;
        detail << single.survivors << " survivors, " << single_time << " s single worker";
        report(2, "survivor count 3200", single.survivors == 3200 && single_time < 600.0, detail.str());
    }

    // 3. Orbit count.
    {
        std::uint64_t orbit_sum = 0;
        for (const ClassRecord& c : single.classes) orbit_sum += static_cast<std::uint64_t>(c.orbit_size);
        std::ostringstream detail;
        detail << single.classes.size() << " classes, orbit sizes sum to " << orbit_sum;
        report(3, "105 isometry classes covering 3200 sets", single.classes.size() == 105 && orbit_sum == 3200,
               detail.str());
    }

    // 4. Graph-type multiplicities.
    {
        std::multiset<int> trees;
        std::multiset<int> others;
        for (const GraphType& t : single.graph_types) (t.graph.is_tree() ? trees : others).insert(t.multiplicity);
        const std::multiset<int> want_trees{19, 3, 12, 3, 1};
        const std::multiset<int> want_others{3, 8, 17, 25, 2, 9, 3};
        std::ostringstream detail;
        detail << single.graph_types.size() << " codes, trees " << join(trees) << ", non-trees " << join(others);
        report(4, "graph-type multiplicities",
               single.graph_types.size() == 12 && trees == want_trees && others == want_others, detail.str());
    }

    // 5. Golden representatives and label matching.
    {
        std::vector<std::string> problems;
        std::map<std::string, std::set<GraphCode>> codes_by_label;
        std::size_t survivors = 0;
        for (const ReferenceEntry& e : entries) {
            const NeighborAutomaton automaton(e.set);
            if (!passes_filters(automaton)) {
                problems.push_back(e.label + " " + e.listing_id + " fails the filters");
                continue;
            }
            ++survivors;
            codes_by_label[e.label].insert(graph_code(intersection_graph(automaton)));
        }
        std::set<GraphCode> distinct;
        for (const auto& [label, codes] : codes_by_label) {
            if (codes.size() != 1) problems.push_back("table " + label + " spans " + std::to_string(codes.size()) + " codes");
            distinct.insert(codes.begin(), codes.end());
        }
        if (distinct.size() != 12) problems.push_back(std::to_string(distinct.size()) + " distinct table codes");
        std::size_t labels = 0;
        try {
            const ClassificationReport labelled = match_labels(single, entries);
            for (const GraphType& t : labelled.graph_types) labels += t.label ? 1 : 0;
        } catch (const Error& e) {
            problems.push_back(std::string("label matching: ") + e.what());
        }
        const VerificationSummary summary = verify_against_tables(match_labels(single, table_heads(entries)), entries);
        for (const std::string& m : summary.mismatches) problems.push_back(m);
        std::ostringstream detail;
        detail << survivors << "/" << entries.size() << " survive, " << summary.matched << "/" << summary.entries
               << " matched, " << labels << " labels";
        for (const std::string& p : problems) detail << "; " << p;
        report(5, "golden representatives", problems.empty() && labels == 12 && survivors == 105, detail.str());
    }

    // 6. Dendrite verdicts.
    {
        std::vector<std::string> wrong;
        for (const ReferenceEntry& e : entries) {
            bool dendrite = false;
            try {
                dendrite = is_dendrite(e.set);
            } catch (const Error& err) {
                wrong.push_back(e.listing_id + ": " + err.what());
                continue;
            }
            if (dendrite != e.dendrite_table()) wrong.push_back(e.label + " " + e.listing_id);
        }
        std::ostringstream detail;
        detail << entries.size() - wrong.size() << "/" << entries.size() << " agree with their table";
        for (const std::string& w : wrong) detail << "; " << w;
        report(6, "dendrite verdicts", wrong.empty() && entries.size() == 105, detail.str());
    }

    // 7. No triple points.
    {
        std::size_t clean = 0;
        for (const DigitSet& d : sets) clean += verify_no_triple_points(d) ? 1 : 0;
        std::ostringstream detail;
        detail << clean << "/" << sets.size() << " without triple points";
        report(7, "no triple points", clean == sets.size() && clean == 105, detail.str());
    }

    // 8. Oracle equivalence.
    {
        const auto oracle_start = Clock::now();
        const OracleSweep sweep = oracle_sweep(sets, 6, hardware);
        const double took = seconds_since(oracle_start);
        std::ostringstream detail;
        detail << sweep.agreed << "/" << sweep.checks << " agreed, " << took << " s";
        for (const std::string& d : sweep.disagreements) detail << "; " << d;
        report(8, "oracle equivalence", sweep.ok() && sweep.checks == 2730 && took < 60.0, detail.str());
    }

    // 9. Property suites.
    {
        std::size_t checks = 0;
        std::size_t violated = 0;
        std::vector<std::string> violations; // first few only
        auto expect = [&](bool ok, const std::function<std::string()>& what) {
            ++checks;
            if (ok) return;
            ++violated;
            if (violations.size() < 10) violations.push_back(what());
        };
        for (const DigitSet& d : sets) {
            const std::string name = render_compact(d);
            const CanonicalForm form = canonical_form(d);
            expect(form.orbit_size * form.stabilizer_size == 48, [&] { return name + " orbit x stabilizer"; });
            expect(canonical_form(form.canonical).canonical == form.canonical, [&] { return name + " idempotence"; });
            const NeighborAutomaton automaton(d);
            const GraphCode code = graph_code(intersection_graph(automaton));
            std::array<FaceClass, 26> faces;
            for (std::size_t k = 0; k < 26; ++k) faces[k] = automaton.face_class(all_offsets()[k]);
            for (std::size_t k = 0; k < 26; ++k) {
                const Offset alpha = all_offsets()[k];
                const FaceClass opposite = automaton.face_class(-alpha);
                expect(opposite.kind == faces[k].kind, [&] { return name + " F/-F class " + to_string(alpha); });
                if (faces[k].kind == FaceKind::Point && opposite.point) {
                    const RationalPoint& p = faces[k].point->value;
                    const RationalPoint& q = opposite.point->value;
                    expect(p[0] - q[0] == Rational(alpha.a) && p[1] - q[1] == Rational(alpha.b) &&
                               p[2] - q[2] == Rational(alpha.c),
                           [&] { return name + " F/-F offset " + to_string(alpha); });
                }
            }
            for (const Isometry& g : all_isometries()) {
                const DigitSet image = apply_isometry(g, d);
                const CanonicalForm moved = canonical_form(image);
                expect(moved.canonical == form.canonical && moved.orbit_size == form.orbit_size,
                       [&] { return name + " canonical under " + describe(g); });
                const NeighborAutomaton image_automaton(image);
                for (std::size_t k = 0; k < 26; ++k) {
                    const FaceClass f = image_automaton.face_class(apply_linear(g, all_offsets()[k]));
                    bool same = f.kind == faces[k].kind;
                    if (same && f.kind == FaceKind::Point) same = act(g, faces[k].point->value) == f.point->value;
                    expect(same, [&] { return name + " face " + to_string(all_offsets()[k]) + " under " + describe(g); });
                }
                expect(graph_code(intersection_graph(image_automaton)) == code,
                       [&] { return name + " graph code under " + describe(g); });
            }
        }
        const ClassificationReport parallel = classify_all(3, 7, std::max(4, hardware));
        expect(to_json(parallel) == to_json(single), [] { return std::string("json differs across worker counts"); });
        expect(to_csv(parallel) == to_csv(single), [] { return std::string("csv differs across worker counts"); });
        expect(to_markdown(parallel) == to_markdown(single),
               [] { return std::string("markdown differs across worker counts"); });
        std::ostringstream detail;
        detail << checks << " checks, " << violated << " violations";
        for (const std::string& v : violations) detail << "; " << v;
        report(9, "property suites", violated == 0, detail.str());
    }

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
