#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "litmine/rng.hpp"
#include "litmine/roadmap.hpp"

using namespace litmine;
using namespace test_helpers;

namespace {

Roadmap roadmap_with_edges(
    const std::vector<std::pair<std::string, std::string>>& edges) {
    Roadmap map;
    for (const auto& [a, b] : edges) {
        map.nodes.emplace(a, RoadmapNode{2000, 0});
        map.nodes.emplace(b, RoadmapNode{2000, 0});
        map.edges[{a, b}] = {};
        ++map.nodes[a].out_degree;
    }
    return map;
}

std::set<std::pair<std::string, std::string>> edge_set(const Roadmap& map) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [edge, datasets] : map.edges) out.insert(edge);
    return out;
}

// Forward reachability closure over node names.
std::map<std::string, std::set<std::string>> closure(const Roadmap& map) {
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& [edge, d] : map.edges) adj[edge.first].insert(edge.second);
    std::map<std::string, std::set<std::string>> out;
    for (const auto& [name, node] : map.nodes) {
        std::set<std::string> seen;
        std::vector<std::string> stack{name};
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            auto it = adj.find(cur);
            if (it == adj.end()) continue;
            for (const auto& next : it->second)
                if (seen.insert(next).second) stack.push_back(next);
        }
        out[name] = std::move(seen);
    }
    return out;
}

struct RoadmapFixture {
    Corpus corpus;
    std::vector<MarkerMention> mentions;
    std::vector<CanonicalMarker> canonicals;
    MarkerIndex index;
    std::vector<TraceResult> traces;

    void finish() {
        corpus.resolve_references();
        canonicals = canonicalize_corpus(mentions);
        index = MarkerIndex(corpus, mentions, canonicals);
        traces = trace_all(corpus, mentions, canonicals, 2);
    }
};

}  // namespace

TEST_CASE("gather_method_info uses the traced original's year and datasets") {
    RoadmapFixture f;
    add_paper(f.corpus, "orig", 2008);
    add_paper(f.corpus, "c1", 2012, "VEN", {"Utopia"}, {ref_to(1, "orig")});
    add_paper(f.corpus, "c2", 2013, "VEN", {"Utopia"}, {ref_to(1, "orig")});
    f.mentions = {
        make_mention("orig", ChapterLabel::Experiment, "MethA", MarkerKind::Method),
        make_mention("orig", ChapterLabel::Experiment, "SetD", MarkerKind::Dataset),
        make_mention("c1", ChapterLabel::Experiment, "MethA", MarkerKind::Method, 1),
        make_mention("c2", ChapterLabel::Experiment, "MethA", MarkerKind::Method, 1),
    };
    f.finish();
    REQUIRE(f.traces.size() == 1);

    auto gathered = gather_method_info({"MethA"}, f.traces, f.index);
    REQUIRE(gathered.infos.count("MethA") == 1);
    const MethodInfo& info = gathered.infos.at("MethA");
    CHECK(info.original_paper == "orig");
    CHECK(info.year == 2008);
    CHECK(info.datasets == std::set<std::string>{"SetD"});
}

TEST_CASE("gather_method_info falls back to the earliest citing paper") {
    RoadmapFixture f;
    add_paper(f.corpus, "late", 2012);
    add_paper(f.corpus, "early", 2010);
    f.mentions = {
        make_mention("late", ChapterLabel::Methodology, "MethB", MarkerKind::Method),
        make_mention("early", ChapterLabel::Methodology, "MethB", MarkerKind::Method),
    };
    f.finish();
    CHECK(f.traces.empty());  // no adjacent references anywhere

    auto gathered = gather_method_info({"MethB"}, f.traces, f.index);
    REQUIRE(gathered.infos.count("MethB") == 1);
    CHECK(gathered.infos.at("MethB").original_paper == "early");
    CHECK(gathered.infos.at("MethB").year == 2010);
    CHECK(gathered.infos.at("MethB").datasets.empty());
}

TEST_CASE("gather_method_info skips methods with no papers") {
    RoadmapFixture f;
    add_paper(f.corpus, "p", 2010);
    f.finish();
    auto gathered = gather_method_info({"Ghost"}, f.traces, f.index);
    CHECK(gathered.infos.empty());
    REQUIRE(gathered.skipped.size() == 1);
    CHECK(gathered.skipped[0] == "Ghost");
}

TEST_CASE("build_edges links originals to compared methods") {
    RoadmapFixture f;
    // B's original paper runs experiments mentioning A on dataset SetD.
    add_paper(f.corpus, "origA", 2005);
    add_paper(f.corpus, "origB", 2008, "VEN", {"Utopia"}, {ref_to(1, "origA")});
    add_paper(f.corpus, "cA1", 2010, "VEN", {"Utopia"}, {ref_to(1, "origA")});
    add_paper(f.corpus, "cA2", 2011, "VEN", {"Utopia"}, {ref_to(1, "origA")});
    add_paper(f.corpus, "cB1", 2012, "VEN", {"Utopia"}, {ref_to(2, "origB")});
    add_paper(f.corpus, "cB2", 2013, "VEN", {"Utopia"}, {ref_to(2, "origB")});
    f.mentions = {
        make_mention("origB", ChapterLabel::Experiment, "MethB", MarkerKind::Method),
        make_mention("origB", ChapterLabel::Experiment, "MethA", MarkerKind::Method),
        make_mention("origB", ChapterLabel::Experiment, "SetD", MarkerKind::Dataset),
        make_mention("cA1", ChapterLabel::Experiment, "MethA", MarkerKind::Method, 1),
        make_mention("cA2", ChapterLabel::Experiment, "MethA", MarkerKind::Method, 1),
        make_mention("cB1", ChapterLabel::Experiment, "MethB", MarkerKind::Method, 2),
        make_mention("cB2", ChapterLabel::Experiment, "MethB", MarkerKind::Method, 2),
    };
    f.finish();
    REQUIRE(f.traces.size() == 2);

    std::vector<std::string> cluster = {"MethA", "MethB"};
    auto gathered = gather_method_info(cluster, f.traces, f.index);
    Roadmap map = build_edges(cluster, gathered, f.index, 0);
    REQUIRE(map.edges.size() == 1);
    auto it = map.edges.begin();
    CHECK(it->first.first == "MethB");
    CHECK(it->first.second == "MethA");
    CHECK(it->second == std::set<std::string>{"SetD"});
    CHECK(map.nodes.at("MethB").out_degree == 1);
    // The original paper of B mentions B itself; no self-loop appears.
    for (const auto& [edge, datasets] : map.edges) CHECK(edge.first != edge.second);
}

TEST_CASE("transitive_reduce removes the paper's own triangle example") {
    Roadmap map = roadmap_with_edges({{"A", "B"}, {"B", "C"}, {"A", "C"}});
    Roadmap reduced = transitive_reduce(map);
    CHECK(edge_set(reduced) ==
          std::set<std::pair<std::string, std::string>>{{"A", "B"}, {"B", "C"}});
    CHECK(reduced.cyclic_edges.empty());
    CHECK(reduced.nodes.at("A").out_degree == 1);
}

TEST_CASE("transitive_reduce leaves chains unchanged") {
    Roadmap map = roadmap_with_edges({{"A", "B"}, {"B", "C"}, {"C", "D"}});
    Roadmap reduced = transitive_reduce(map);
    CHECK(edge_set(reduced) == edge_set(map));
}

TEST_CASE("transitive_reduce keeps and flags cycles") {
    Roadmap map = roadmap_with_edges({{"A", "B"}, {"B", "A"}});
    Roadmap reduced = transitive_reduce(map);
    CHECK(edge_set(reduced) == edge_set(map));
    CHECK(reduced.cyclic_edges.size() == 2);
}

TEST_CASE("transitive_reduce preserves reachability on random dags") {
    Rng rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 3 + static_cast<int>(rng.below(10));
        std::vector<std::pair<std::string, std::string>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform01() < 0.3)
                    edges.push_back({"n" + std::to_string(i), "n" + std::to_string(j)});
        if (edges.empty()) continue;
        Roadmap map = roadmap_with_edges(edges);
        Roadmap reduced = transitive_reduce(map);
        CHECK(closure(map) == closure(reduced));
        // Reduction is a fixed point.
        Roadmap twice = transitive_reduce(reduced);
        CHECK(edge_set(twice) == edge_set(reduced));
        // Out-degrees equal the post-reduction edge counts.
        std::map<std::string, int> counts;
        for (const auto& [edge, d] : reduced.edges) ++counts[edge.first];
        for (const auto& [name, node] : reduced.nodes)
            CHECK(node.out_degree == (counts.count(name) ? counts[name] : 0));
    }
}

TEST_CASE("emit_dot produces a parseable graph with a legend") {
    Roadmap map;
    map.cluster_id = 3;
    map.nodes["MethA"] = {2010, 1};
    map.nodes["MethB"] = {2012, 0};
    map.edges[{"MethA", "MethB"}] = {"SetD"};
    std::string dot = emit_dot(map);
    CHECK(dot.find("digraph roadmap_3 {") != std::string::npos);
    CHECK(dot.find("\"MethA\" [year=2010, out_degree=1];") != std::string::npos);
    CHECK(dot.find("\"MethA\" -> \"MethB\" [label=\"1\"];") != std::string::npos);
    CHECK(dot.find("// 1: SetD") != std::string::npos);
    CHECK(emit_legend(map) == "1: SetD\n");
}

TEST_CASE("emit_dot handles edgeless roadmaps and null labels") {
    Roadmap edgeless;
    edgeless.nodes["MethA"] = {2010, 0};
    std::string dot = emit_dot(edgeless);
    CHECK(dot.find("->") == std::string::npos);
    CHECK(dot.find("\"MethA\"") != std::string::npos);

    Roadmap unlabeled;
    unlabeled.nodes["MethA"] = {2010, 1};
    unlabeled.nodes["MethB"] = {2011, 0};
    unlabeled.edges[{"MethA", "MethB"}] = {};
    CHECK(emit_legend(unlabeled) == "1: null\n");
}
