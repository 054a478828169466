#pragma once

// Shared fixtures for the analytics test suites: tiny hand-built corpora and
// an adjusted Rand index for scoring planted clusterings.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "litmine/corpus.hpp"
#include "litmine/extract.hpp"
#include "litmine/marker_index.hpp"
#include "litmine/normalize.hpp"

namespace test_helpers {

using namespace litmine;

struct RefSpec {
    int ref_id;
    std::string title;
    std::optional<int> year;
};

inline void add_paper(Corpus& corpus, const std::string& id, int year,
                      const std::string& venue = "VEN",
                      const std::vector<std::string>& countries = {"Utopia"},
                      const std::vector<RefSpec>& refs = {},
                      VenueRank rank = VenueRank::A) {
    PaperRecord rec;
    rec.paper_id = id;
    rec.title = "Title of " + id;
    rec.year = year;
    rec.venue = venue;
    rec.venue_rank = rank;
    rec.countries = countries;
    for (const auto& r : refs)
        rec.references.push_back({r.ref_id, r.title, r.year, std::nullopt});
    corpus.add(std::move(rec));
}

inline MarkerMention make_mention(const std::string& paper, ChapterLabel chapter,
                                  const std::string& surface, MarkerKind kind,
                                  std::optional<int> adjacent_ref = std::nullopt) {
    MarkerMention m;
    m.paper_id = paper;
    m.chapter = chapter;
    m.surface = surface;
    m.kind = kind;
    m.span_end = 1;
    m.adjacent_ref = adjacent_ref;
    return m;
}

// Reference title convention used by the fixtures: citing papers reference
// "Title of <paper>" so resolution lands on the in-corpus original.
inline RefSpec ref_to(int ref_id, const std::string& paper_id,
                      std::optional<int> year = std::nullopt) {
    return {ref_id, "Title of " + paper_id, year};
}

// Adjusted Rand index between two labelings of the same items.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<std::pair<int, int>, long long> joint;
    std::map<int, long long> rows, cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++joint[{a[i], b[i]}];
        ++rows[a[i]];
        ++cols[b[i]];
    }
    auto choose2 = [](long long n) { return n * (n - 1) / 2; };
    double sum_joint = 0, sum_rows = 0, sum_cols = 0;
    for (const auto& [k, v] : joint) sum_joint += static_cast<double>(choose2(v));
    for (const auto& [k, v] : rows) sum_rows += static_cast<double>(choose2(v));
    for (const auto& [k, v] : cols) sum_cols += static_cast<double>(choose2(v));
    double total = static_cast<double>(choose2(static_cast<long long>(a.size())));
    double expected = sum_rows * sum_cols / total;
    double maximum = 0.5 * (sum_rows + sum_cols);
    if (maximum == expected) return 1.0;  // degenerate: single cluster both sides
    return (sum_joint - expected) / (maximum - expected);
}

}  // namespace test_helpers
