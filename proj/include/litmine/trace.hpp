#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litmine/corpus.hpp"
#include "litmine/marker_index.hpp"
#include "litmine/normalize.hpp"

namespace litmine {

struct TraceResult {
    MarkerKind kind = MarkerKind::Method;
    std::string canonical;                 // the traced marker
    RefIdentity original;                  // winner of the vote
    std::map<std::string, int> vote_counts;  // identity key -> votes
    std::set<std::string> citing_papers;   // papers contributing a vote
};

// Mentions of the marker, any alias, restricted to the methodology and
// experiment chapters.
inline std::vector<MarkerMention> collect_citing_mentions(
    const CanonicalMarker& marker, const std::vector<MarkerMention>& mentions) {
    std::vector<MarkerMention> out;
    for (const auto& m : mentions) {
        if (m.kind != marker.kind) continue;
        if (m.chapter != ChapterLabel::Methodology &&
            m.chapter != ChapterLabel::Experiment)
            continue;
        if (!marker.aliases.count(m.surface)) continue;
        out.push_back(m);
    }
    return out;
}

// Tallies adjacent references over the citing mentions and picks the most
// cited entry. Ties go to the earliest reference year, then the smallest
// title. Markers with no adjacent references trace to nothing.
inline std::optional<TraceResult> trace_original(
    const CanonicalMarker& marker, const Corpus& corpus,
    const std::vector<MarkerMention>& mentions) {
    struct Tally {
        int votes = 0;
        RefIdentity identity;
    };
    std::map<std::string, Tally> tallies;
    std::set<std::string> citing;

    for (const auto& m : collect_citing_mentions(marker, mentions)) {
        if (!m.adjacent_ref) continue;
        auto ident = reference_identity(corpus, m.paper_id, *m.adjacent_ref);
        if (!ident) continue;
        Tally& t = tallies[ident->key];
        ++t.votes;
        if (t.votes == 1) {
            t.identity = *ident;
        } else {
            // Keep the earliest year and smallest title seen for the identity.
            if (ident->year && (!t.identity.year || *ident->year < *t.identity.year))
                t.identity.year = ident->year;
            if (ident->title < t.identity.title) t.identity.title = ident->title;
        }
        citing.insert(m.paper_id);
    }
    if (tallies.empty()) return std::nullopt;

    const Tally* best = nullptr;
    auto year_rank = [](const std::optional<int>& y) {
        return y ? *y : std::numeric_limits<int>::max();
    };
    for (const auto& [key, tally] : tallies) {
        if (!best) {
            best = &tally;
            continue;
        }
        auto lhs = std::tuple(-tally.votes, year_rank(tally.identity.year),
                              tally.identity.title);
        auto rhs = std::tuple(-best->votes, year_rank(best->identity.year),
                              best->identity.title);
        if (lhs < rhs) best = &tally;
    }

    TraceResult result;
    result.kind = marker.kind;
    result.canonical = marker.canonical;
    result.original = best->identity;
    for (const auto& [key, tally] : tallies) result.vote_counts[key] = tally.votes;
    result.citing_papers = std::move(citing);
    return result;
}

// Traces every canonical method and dataset with enough adjacent-reference
// mentions. Metrics are never traced.
inline std::vector<TraceResult> trace_all(const Corpus& corpus,
                                          const std::vector<MarkerMention>& mentions,
                                          const std::vector<CanonicalMarker>& canonicals,
                                          int min_citations = 2) {
    if (min_citations < 2) throw InvalidInput("min_citations must be >= 2");
    std::vector<TraceResult> results;
    for (const auto& marker : canonicals) {
        if (marker.kind == MarkerKind::Metric) continue;
        int adjacent = 0;
        for (const auto& m : collect_citing_mentions(marker, mentions))
            if (m.adjacent_ref) ++adjacent;
        if (adjacent < min_citations) continue;
        if (auto result = trace_original(marker, corpus, mentions))
            results.push_back(std::move(*result));
    }
    std::sort(results.begin(), results.end(),
              [](const TraceResult& a, const TraceResult& b) {
                  return std::tie(a.kind, a.canonical) < std::tie(b.kind, b.canonical);
              });
    return results;
}

// Trace ledger export: kind, canonical, original title, original paper id,
// winning votes, citing paper count.
inline void write_trace_ledger(const std::vector<TraceResult>& traces,
                               const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace ledger " + path.string());
    out << "kind\tcanonical\toriginal_title\toriginal_paper_id\tvotes\tciting_count\n";
    for (const auto& t : traces) {
        auto it = t.vote_counts.find(t.original.key);
        int votes = it == t.vote_counts.end() ? 0 : it->second;
        out << to_string(t.kind) << '\t' << t.canonical << '\t' << t.original.title
            << '\t' << (t.original.paper_id ? *t.original.paper_id : "") << '\t'
            << votes << '\t' << t.citing_papers.size() << '\n';
    }
}

}  // namespace litmine
