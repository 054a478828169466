#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "helpers.hpp"
#include "litmine/rng.hpp"
#include "litmine/trace.hpp"

using namespace litmine;
using namespace test_helpers;

namespace {

CanonicalMarker marker_of(const std::vector<MarkerMention>& mentions,
                          MarkerKind kind, const std::string& canonical) {
    auto canon = canonicalize_corpus(mentions);
    for (auto& cm : canon)
        if (cm.kind == kind && cm.canonical == canonical) return cm;
    FAIL("canonical marker not found: " + canonical);
    return {};
}

}  // namespace

TEST_CASE("collect_citing_mentions filters to methodology and experiment") {
    std::vector<MarkerMention> mentions = {
        make_mention("p1", ChapterLabel::Introduction, "SVM", MarkerKind::Method),
        make_mention("p1", ChapterLabel::Experiment, "SVM", MarkerKind::Method),
    };
    CanonicalMarker marker;
    marker.kind = MarkerKind::Method;
    marker.canonical = "SVM";
    marker.aliases = {"SVM"};
    auto citing = collect_citing_mentions(marker, mentions);
    REQUIRE(citing.size() == 1);
    CHECK(citing[0].chapter == ChapterLabel::Experiment);
}

TEST_CASE("collect_citing_mentions covers all aliases and is empty for absent markers") {
    std::vector<MarkerMention> mentions = {
        make_mention("p1", ChapterLabel::Methodology, "SVMs", MarkerKind::Method),
        make_mention("p2", ChapterLabel::Methodology, "SVM", MarkerKind::Method),
    };
    CanonicalMarker marker;
    marker.kind = MarkerKind::Method;
    marker.canonical = "SVM";
    marker.aliases = {"SVM", "SVMs"};
    CHECK(collect_citing_mentions(marker, mentions).size() == 2);

    CanonicalMarker absent;
    absent.kind = MarkerKind::Method;
    absent.canonical = "CNN";
    absent.aliases = {"CNN"};
    CHECK(collect_citing_mentions(absent, mentions).empty());
}

TEST_CASE("trace_original tallies adjacent references") {
    Corpus corpus;
    add_paper(corpus, "orig1", 2005);
    add_paper(corpus, "orig2", 2007);
    add_paper(corpus, "c1", 2010, "VEN", {"Utopia"}, {ref_to(1, "orig1")});
    add_paper(corpus, "c2", 2011, "VEN", {"Utopia"}, {ref_to(1, "orig1")});
    add_paper(corpus, "c3", 2012, "VEN", {"Utopia"}, {ref_to(1, "orig2")});
    corpus.resolve_references();

    std::vector<MarkerMention> mentions = {
        make_mention("c1", ChapterLabel::Methodology, "SVM", MarkerKind::Method, 1),
        make_mention("c2", ChapterLabel::Experiment, "SVM", MarkerKind::Method, 1),
        make_mention("c3", ChapterLabel::Experiment, "SVM", MarkerKind::Method, 1),
    };
    auto marker = marker_of(mentions, MarkerKind::Method, "SVM");
    auto result = trace_original(marker, corpus, mentions);
    REQUIRE(result.has_value());
    CHECK(result->original.paper_id == std::optional<std::string>("orig1"));
    CHECK(result->vote_counts.at("id:orig1") == 2);
    CHECK(result->vote_counts.at("id:orig2") == 1);
    CHECK(result->citing_papers == std::set<std::string>{"c1", "c2", "c3"});
}

TEST_CASE("trace_original without adjacent references yields nothing") {
    Corpus corpus;
    add_paper(corpus, "c1", 2010);
    std::vector<MarkerMention> mentions = {
        make_mention("c1", ChapterLabel::Methodology, "SVM", MarkerKind::Method),
    };
    auto marker = marker_of(mentions, MarkerKind::Method, "SVM");
    CHECK_FALSE(trace_original(marker, corpus, mentions).has_value());
}

TEST_CASE("trace_original breaks vote ties by earliest year then title") {
    Corpus corpus;
    add_paper(corpus, "old", 2010);
    add_paper(corpus, "new", 2014);
    add_paper(corpus, "c1", 2015, "VEN", {"Utopia"},
              {ref_to(1, "old"), ref_to(2, "new")});
    add_paper(corpus, "c2", 2016, "VEN", {"Utopia"},
              {ref_to(1, "old"), ref_to(2, "new")});
    corpus.resolve_references();

    std::vector<MarkerMention> mentions = {
        make_mention("c1", ChapterLabel::Experiment, "SVM", MarkerKind::Method, 2),
        make_mention("c2", ChapterLabel::Experiment, "SVM", MarkerKind::Method, 1),
    };
    auto marker = marker_of(mentions, MarkerKind::Method, "SVM");
    auto result = trace_original(marker, corpus, mentions);
    REQUIRE(result.has_value());
    CHECK(result->original.paper_id == std::optional<std::string>("old"));
}

TEST_CASE("trace_original falls back to title identity outside the corpus") {
    Corpus corpus;
    add_paper(corpus, "c1", 2015, "VEN", {"Utopia"},
              {{7, "An External Classic", 1998}});
    add_paper(corpus, "c2", 2016, "VEN", {"Utopia"},
              {{3, "an  external classic", 1998}});
    corpus.resolve_references();

    std::vector<MarkerMention> mentions = {
        make_mention("c1", ChapterLabel::Experiment, "SVM", MarkerKind::Method, 7),
        make_mention("c2", ChapterLabel::Experiment, "SVM", MarkerKind::Method, 3),
    };
    auto marker = marker_of(mentions, MarkerKind::Method, "SVM");
    auto result = trace_original(marker, corpus, mentions);
    REQUIRE(result.has_value());
    CHECK_FALSE(result->original.paper_id.has_value());
    // Case-normalised titles merge into one identity with both votes.
    CHECK(result->vote_counts.size() == 1);
    CHECK(result->vote_counts.begin()->second == 2);
    CHECK(result->original.year == std::optional<int>(1998));
}

TEST_CASE("trace_original is stable under mention reordering") {
    Corpus corpus;
    add_paper(corpus, "orig1", 2005);
    add_paper(corpus, "orig2", 2006);
    for (int i = 0; i < 5; ++i)
        add_paper(corpus, "c" + std::to_string(i), 2010 + i, "VEN", {"Utopia"},
                  {ref_to(1, "orig1"), ref_to(2, "orig2")});
    corpus.resolve_references();

    std::vector<MarkerMention> mentions;
    for (int i = 0; i < 5; ++i)
        mentions.push_back(make_mention("c" + std::to_string(i),
                                        ChapterLabel::Experiment, "SVM",
                                        MarkerKind::Method, i < 3 ? 1 : 2));
    auto marker = marker_of(mentions, MarkerKind::Method, "SVM");
    auto reference = trace_original(marker, corpus, mentions);
    REQUIRE(reference.has_value());

    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        rng.shuffle(mentions);
        auto marker2 = marker_of(mentions, MarkerKind::Method, "SVM");
        auto result = trace_original(marker2, corpus, mentions);
        REQUIRE(result.has_value());
        CHECK(result->original.key == reference->original.key);
        CHECK(result->vote_counts == reference->vote_counts);
    }
}

TEST_CASE("trace_all applies the citation threshold and skips metrics") {
    Corpus corpus;
    add_paper(corpus, "orig1", 2005);
    add_paper(corpus, "orig2", 2006);
    add_paper(corpus, "orig3", 2007);
    for (int i = 0; i < 3; ++i)
        add_paper(corpus, "c" + std::to_string(i), 2010 + i, "VEN", {"Utopia"},
                  {ref_to(1, "orig1"), ref_to(2, "orig2"), ref_to(3, "orig3")});
    corpus.resolve_references();

    // MethA cited 3x, MethB 2x, MethC 1x; a metric with anchors is ignored.
    std::vector<MarkerMention> mentions;
    for (int i = 0; i < 3; ++i)
        mentions.push_back(make_mention("c" + std::to_string(i),
                                        ChapterLabel::Experiment, "MethA",
                                        MarkerKind::Method, 1));
    for (int i = 0; i < 2; ++i)
        mentions.push_back(make_mention("c" + std::to_string(i),
                                        ChapterLabel::Methodology, "MethB",
                                        MarkerKind::Method, 2));
    mentions.push_back(make_mention("c0", ChapterLabel::Experiment, "MethC",
                                    MarkerKind::Method, 3));
    mentions.push_back(make_mention("c0", ChapterLabel::Experiment, "score",
                                    MarkerKind::Metric, 3));
    mentions.push_back(make_mention("c1", ChapterLabel::Experiment, "score",
                                    MarkerKind::Metric, 3));

    auto canon = canonicalize_corpus(mentions);
    auto traces = trace_all(corpus, mentions, canon, 2);
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].canonical == "MethA");
    CHECK(traces[1].canonical == "MethB");

    CHECK(trace_all(corpus, mentions, canon, 5).empty());
    CHECK_THROWS_AS(trace_all(corpus, mentions, canon, 1), InvalidInput);
    CHECK(trace_all(Corpus{}, {}, {}, 2).empty());
}

TEST_CASE("trace ledger export is well formed") {
    Corpus corpus;
    add_paper(corpus, "orig1", 2005);
    add_paper(corpus, "c1", 2010, "VEN", {"Utopia"}, {ref_to(1, "orig1")});
    add_paper(corpus, "c2", 2011, "VEN", {"Utopia"}, {ref_to(1, "orig1")});
    corpus.resolve_references();
    std::vector<MarkerMention> mentions = {
        make_mention("c1", ChapterLabel::Experiment, "SVM", MarkerKind::Method, 1),
        make_mention("c2", ChapterLabel::Experiment, "SVM", MarkerKind::Method, 1),
    };
    auto canon = canonicalize_corpus(mentions);
    auto traces = trace_all(corpus, mentions, canon, 2);

    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "litmine_trace.tsv";
    write_trace_ledger(traces, path);
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header ==
          "kind\tcanonical\toriginal_title\toriginal_paper_id\tvotes\tciting_count");
    CHECK(row == "Method\tSVM\tTitle of orig1\torig1\t2\t2");
    fs::remove(path);
}
