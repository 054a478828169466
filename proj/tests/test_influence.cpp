#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "litmine/influence.hpp"
#include "litmine/rng.hpp"

using namespace litmine;
using namespace test_helpers;

namespace {

// Independent oracle: direct summation with base-2 logs.
double jsd_oracle(const Distribution& p, const Distribution& q) {
    auto kl = [](const Distribution& a, const Distribution& m) {
        double out = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] > 0.0) out += a[i] * (std::log(a[i] / m[i]) / std::log(2.0));
        return out;
    };
    Distribution m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
    return 0.5 * kl(p, m) + 0.5 * kl(q, m);
}

Distribution random_distribution(Rng& rng, std::size_t dim) {
    Distribution d(dim);
    double total = 0.0;
    for (double& v : d) {
        v = rng.uniform01();
        total += v;
    }
    for (double& v : d) v /= total;
    return d;
}

}  // namespace

TEST_CASE("assign_scene_cluster takes the argmax with low-id ties") {
    CHECK(assign_scene_cluster({1, 1, 1, 2}) == std::optional<int>(1));
    CHECK(assign_scene_cluster({2, 2, 1, 1}) == std::optional<int>(1));
    CHECK_FALSE(assign_scene_cluster({}).has_value());
}

TEST_CASE("scene_distribution normalises occurrences") {
    Distribution d = scene_distribution({0, 0, 0, 1}, 3);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == Catch::Approx(0.75));
    CHECK(d[1] == Catch::Approx(0.25));
    CHECK(d[2] == 0.0);

    Distribution one_hot = scene_distribution({2}, 3);
    CHECK(one_hot[2] == 1.0);

    CHECK_THROWS_AS(scene_distribution({}, 3, "p1"), NoScenes);
}

TEST_CASE("scene assignment is invariant under occurrence rescaling") {
    std::vector<int> occ = {0, 0, 1};
    std::vector<int> scaled = {0, 0, 0, 0, 1, 1};
    CHECK(assign_scene_cluster(occ) == assign_scene_cluster(scaled));
}

TEST_CASE("js_divergence basics") {
    Distribution p = {0.5, 0.5};
    CHECK(js_divergence(p, p) == 0.0);
    Distribution a = {1.0, 0.0}, b = {0.0, 1.0};
    CHECK(js_divergence(a, b) == Catch::Approx(1.0));
    CHECK_THROWS_AS(js_divergence({1.0}, {0.5, 0.5}), InvalidInput);
}

TEST_CASE("js_divergence matches the direct-summation oracle") {
    Distribution p = {1.0, 0.0}, q = {0.5, 0.5};
    double expected = jsd_oracle(p, q);
    CHECK(js_divergence(p, q) == Catch::Approx(expected).margin(1e-12));
    CHECK(js_divergence(p, q) == Catch::Approx(0.311278).margin(1e-6));
}

TEST_CASE("js_divergence properties on random pairs") {
    Rng rng(271828);
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t dim = 2 + rng.below(31);
        Distribution p = random_distribution(rng, dim);
        Distribution q = random_distribution(rng, dim);
        double pq = js_divergence(p, q);
        double qp = js_divergence(q, p);
        CHECK(std::abs(pq - qp) <= 1e-9);
        CHECK(pq >= -1e-9);
        CHECK(pq <= 1.0 + 1e-9);
        CHECK(js_divergence(p, p) <= 1e-12);
    }
}

namespace {

// Two scene clusters: cluster 0 around SetX/MeasX, cluster 1 around
// SetY/MeasY. Method "Meth" originates in cluster 1 and is cited by papers
// in cluster 0.
struct InfluenceFixture {
    Corpus corpus;
    std::vector<MarkerMention> mentions;
    std::vector<CanonicalMarker> canonicals;
    MarkerIndex index;
    std::vector<TraceResult> traces;
    NamedClustering metric_clusters;
    NamedClustering scene_clusters;
    SceneAssignment assignment;

    void add_scene_paper(const std::string& id, int year, const std::string& dataset,
                         const std::string& metric,
                         const std::vector<RefSpec>& refs = {},
                         std::optional<int> cite_ref = std::nullopt) {
        add_paper(corpus, id, year, "VEN", {"Utopia"}, refs);
        mentions.push_back(
            make_mention(id, ChapterLabel::Experiment, dataset, MarkerKind::Dataset));
        mentions.push_back(
            make_mention(id, ChapterLabel::Experiment, metric, MarkerKind::Metric));
        if (cite_ref)
            mentions.push_back(make_mention(id, ChapterLabel::Experiment, "Meth",
                                            MarkerKind::Method, cite_ref));
    }

    void finish() {
        corpus.resolve_references();
        canonicals = canonicalize_corpus(mentions);
        index = MarkerIndex(corpus, mentions, canonicals);
        traces = trace_all(corpus, mentions, canonicals, 2);

        metric_clusters.k = 2;
        metric_clusters.assignments = {{"MeasX", 0}, {"MeasY", 1}};
        scene_clusters.k = 2;
        scene_clusters.assignments = {{SceneId{"SetX", 0}.key(), 0},
                                      {SceneId{"SetY", 1}.key(), 1}};
        assignment = assign_all_scenes(index, metric_clusters, scene_clusters);
    }
};

}  // namespace

TEST_CASE("influence scores from a planted two-cluster corpus") {
    InfluenceFixture f;
    // Original paper of Meth lives in scene cluster 1.
    f.add_scene_paper("orig", 2010, "SetY", "MeasY");
    f.mentions.push_back(
        make_mention("orig", ChapterLabel::Experiment, "Meth", MarkerKind::Method));
    // Citing papers in scene cluster 0, within the three-year window.
    f.add_scene_paper("cite1", 2011, "SetX", "MeasX", {ref_to(1, "orig")}, 1);
    f.add_scene_paper("cite2", 2012, "SetX", "MeasX", {ref_to(1, "orig")}, 1);
    // A same-cluster citer never contributes.
    f.add_scene_paper("same", 2011, "SetY", "MeasY", {ref_to(1, "orig")}, 1);
    // A stale citer outside the window.
    f.add_scene_paper("stale", 2019, "SetX", "MeasX", {ref_to(1, "orig")}, 1);
    f.finish();
    REQUIRE(f.traces.size() == 1);

    auto influence = id_method(f.traces[0], f.assignment, f.index);
    REQUIRE(influence.has_value());
    CHECK(influence->scene_cluster == 1);
    CHECK(influence->citing_papers == 2);

    // Oracle: recompute Eq. 2/3 from the distributions directly.
    double expected = jsd_oracle(f.assignment.distribution_of.at("orig"),
                                 f.assignment.distribution_of.at("cite1")) +
                      jsd_oracle(f.assignment.distribution_of.at("orig"),
                                 f.assignment.distribution_of.at("cite2"));
    CHECK(influence->id == Catch::Approx(expected).margin(1e-12));
    REQUIRE(influence->idr.has_value());
    CHECK(*influence->idr == Catch::Approx(expected / 2.0).margin(1e-12));

    // IDR of scene cluster 0: the citing papers sit in cluster 0 and cite a
    // method proposed by a cluster-1 paper.
    auto idr0 = idr_scene(0, f.assignment, f.traces, f.index);
    REQUIRE(idr0.has_value());
    double pair_total = jsd_oracle(f.assignment.distribution_of.at("cite1"),
                                   f.assignment.distribution_of.at("orig")) +
                        jsd_oracle(f.assignment.distribution_of.at("cite2"),
                                   f.assignment.distribution_of.at("orig"));
    CHECK(*idr0 == Catch::Approx(pair_total / 2.0).margin(1e-12));

    // Cluster 1 receives no influence: its papers cite nothing foreign.
    CHECK_FALSE(idr_scene(1, f.assignment, f.traces, f.index).has_value());
}

TEST_CASE("id_method with only same-cluster citers has undefined rate") {
    InfluenceFixture f;
    f.add_scene_paper("orig", 2010, "SetY", "MeasY");
    f.mentions.push_back(
        make_mention("orig", ChapterLabel::Experiment, "Meth", MarkerKind::Method));
    f.add_scene_paper("same1", 2011, "SetY", "MeasY", {ref_to(1, "orig")}, 1);
    f.add_scene_paper("same2", 2012, "SetY", "MeasY", {ref_to(1, "orig")}, 1);
    f.finish();
    REQUIRE(f.traces.size() == 1);

    auto influence = id_method(f.traces[0], f.assignment, f.index);
    REQUIRE(influence.has_value());
    CHECK(influence->id == 0.0);
    CHECK(influence->citing_papers == 0);
    CHECK_FALSE(influence->idr.has_value());
}

TEST_CASE("identical distributions give zero influence") {
    InfluenceFixture f;
    // Original and citer share the same mixed scene profile but different
    // dominant clusters cannot arise; use one-scene papers in different
    // clusters with equal distributions impossible, so instead: both papers
    // have scenes in both clusters with identical histograms; the argmax tie
    // rule assigns both to cluster 0, making the citer same-cluster. To test
    // JSD = 0 inside Eq. 2 the distribution comparison runs directly.
    Distribution d = {0.5, 0.5};
    CHECK(js_divergence(d, d) == 0.0);
}

TEST_CASE("yearly maxima pick the strongest method per year") {
    Corpus corpus;
    add_paper(corpus, "o2010", 2010, "VenueA");
    add_paper(corpus, "o2011a", 2011, "VenueB");
    add_paper(corpus, "o2011b", 2011, "VenueC");
    std::vector<MethodInfluence> scores;
    MethodInfluence a;
    a.canonical = "MethA";
    a.original_paper = "o2010";
    a.id = 1.0;
    a.idr = 0.5;
    a.citing_papers = 2;
    MethodInfluence b;
    b.canonical = "MethB";
    b.original_paper = "o2011a";
    b.id = 2.0;
    b.idr = 0.4;
    b.citing_papers = 5;
    MethodInfluence c;
    c.canonical = "MethC";
    c.original_paper = "o2011b";
    c.id = 1.5;
    c.idr = 0.75;
    c.citing_papers = 2;
    scores = {a, b, c};

    auto id_max = yearly_maxima(scores, corpus, [](const MethodInfluence& m) {
        return std::optional<double>(m.id);
    });
    REQUIRE(id_max.size() == 2);
    CHECK(id_max[0].method == "MethA");
    CHECK(id_max[1].method == "MethB");
    CHECK(id_max[1].venue == "VenueB");

    auto idr_max = yearly_maxima(scores, corpus, [](const MethodInfluence& m) {
        return m.idr;
    });
    REQUIRE(idr_max.size() == 2);
    CHECK(idr_max[1].method == "MethC");
}
