#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litmine/corpus.hpp"
#include "litmine/marker_index.hpp"
#include "litmine/trace.hpp"

namespace litmine {

// ---------------------------------------------------------------------------
// Effective markers
// ---------------------------------------------------------------------------

enum class EffectiveCounting {
    DistinctPapers,  // default: mentioned by >= threshold distinct papers
    Mentions,        // alternative reading: >= threshold mentions
};

struct EffectiveMarkerSet {
    std::array<std::set<std::string>, kNumMarkerKinds> per_kind;
    int threshold = 2;

    bool contains(MarkerKind kind, const std::string& canonical) const {
        return per_kind[static_cast<std::size_t>(kind)].count(canonical) > 0;
    }
    const std::set<std::string>& of(MarkerKind kind) const {
        return per_kind[static_cast<std::size_t>(kind)];
    }
};

inline EffectiveMarkerSet effective_markers(
    const MarkerIndex& index, int threshold = 2,
    EffectiveCounting counting = EffectiveCounting::DistinctPapers) {
    if (threshold < 2) throw InvalidInput("effective threshold must be >= 2");
    EffectiveMarkerSet out;
    out.threshold = threshold;
    for (int k = 0; k < kNumMarkerKinds; ++k) {
        MarkerKind kind = static_cast<MarkerKind>(k);
        for (const auto& [canonical, papers] : index.citing_papers(kind)) {
            std::size_t count = counting == EffectiveCounting::DistinctPapers
                                    ? papers.size()
                                    : static_cast<std::size_t>(
                                          index.mention_count(kind, canonical));
            if (count >= static_cast<std::size_t>(threshold))
                out.per_kind[k].insert(canonical);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Proposal rates (per country and per venue)
// ---------------------------------------------------------------------------

struct ProposalRates {
    std::string subject;  // country or venue name
    std::size_t methods = 0;   // |M|
    std::size_t datasets = 0;  // |D|
    std::size_t papers = 0;    // |L|
    double method_rate = 0.0;  // MR = |M| / |L|
    double dataset_rate = 0.0; // DR = |D| / |L|
};

namespace detail {

// Shared engine for the country and venue variants: the subject extractor
// yields the credit keys of one paper (all listed countries, or the venue).
template <typename SubjectsOf>
std::vector<ProposalRates> proposal_rates(const std::vector<TraceResult>& traces,
                                          const Corpus& corpus,
                                          SubjectsOf&& subjects_of) {
    std::map<std::string, ProposalRates> by_subject;
    for (const auto& rec : corpus.records())
        for (const auto& subject : subjects_of(rec)) {
            ProposalRates& row = by_subject[subject];
            row.subject = subject;
            ++row.papers;
        }

    std::map<std::string, std::set<std::string>> methods, datasets;
    for (const auto& t : traces) {
        if (!t.original.paper_id) continue;  // unresolved originals are skipped
        const PaperRecord* original = corpus.find(*t.original.paper_id);
        if (!original) continue;
        for (const auto& subject : subjects_of(*original)) {
            auto& target = t.kind == MarkerKind::Method ? methods : datasets;
            target[subject].insert(t.canonical);
        }
    }

    std::vector<ProposalRates> out;
    for (auto& [subject, row] : by_subject) {
        if (row.papers == 0) continue;
        auto mit = methods.find(subject);
        auto dit = datasets.find(subject);
        row.methods = mit == methods.end() ? 0 : mit->second.size();
        row.datasets = dit == datasets.end() ? 0 : dit->second.size();
        row.method_rate = static_cast<double>(row.methods) / row.papers;
        row.dataset_rate = static_cast<double>(row.datasets) / row.papers;
        out.push_back(row);
    }
    return out;  // already sorted by subject via the map
}

}  // namespace detail

// Full credit to every listed country of the original paper.
inline std::vector<ProposalRates> proposal_rates_by_country(
    const std::vector<TraceResult>& traces, const Corpus& corpus) {
    return detail::proposal_rates(traces, corpus, [](const PaperRecord& rec) {
        return rec.countries;
    });
}

inline std::vector<ProposalRates> proposal_rates_by_venue(
    const std::vector<TraceResult>& traces, const Corpus& corpus) {
    return detail::proposal_rates(traces, corpus, [](const PaperRecord& rec) {
        std::vector<std::string> v;
        if (!rec.venue.empty()) v.push_back(rec.venue);
        return v;
    });
}

// ---------------------------------------------------------------------------
// Annual top-k usage
// ---------------------------------------------------------------------------

struct YearTopEntry {
    std::string canonical;
    std::size_t papers = 0;  // distinct papers of that year using the marker
    double share = 0.0;      // papers / total marker usages that year
};

// usage(m, y) = distinct papers of year y mentioning m; descending, ties in
// lexicographic canonical order.
inline std::map<int, std::vector<YearTopEntry>> top_k_per_year(
    const MarkerIndex& index, MarkerKind kind, std::size_t k,
    const std::set<std::string>& eligible) {
    if (k < 1) throw InvalidInput("k must be >= 1");
    std::map<int, std::map<std::string, std::size_t>> usage;  // year -> marker -> papers
    for (const auto& canonical : eligible) {
        const std::set<std::string>* papers = index.citing_papers(kind, canonical);
        if (!papers) continue;
        for (const auto& paper : *papers)
            if (auto year = index.year_of(paper)) ++usage[*year][canonical];
    }
    std::map<int, std::vector<YearTopEntry>> out;
    for (const auto& [year, counts] : usage) {
        std::size_t total = 0;
        for (const auto& [canonical, papers] : counts) total += papers;
        std::vector<YearTopEntry> ranked;
        for (const auto& [canonical, papers] : counts)
            ranked.push_back({canonical, papers,
                              total ? static_cast<double>(papers) / total : 0.0});
        std::sort(ranked.begin(), ranked.end(),
                  [](const YearTopEntry& a, const YearTopEntry& b) {
                      if (a.papers != b.papers) return a.papers > b.papers;
                      return a.canonical < b.canonical;
                  });
        if (ranked.size() > k) ranked.resize(k);
        out[year] = std::move(ranked);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Propagation on datasets (per-year rate) and amongst countries (degree)
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<int> original_year(const TraceResult& t, const MarkerIndex& index) {
    if (t.original.paper_id)
        if (auto y = index.year_of(*t.original.paper_id)) return y;
    return t.original.year;
}

}  // namespace detail

// PR(dy|y): datasets reached by methods proposed in year y within the window
// [y, y+dy]. A dataset counts for method m when both are mentioned in the
// experiment chapter of the same paper.
inline double propagation_rate_datasets(const std::vector<TraceResult>& traces,
                                        const MarkerIndex& index, int year, int dy) {
    if (dy < 0 || dy > 2) throw InvalidInput("dy must be in {0,1,2}");
    std::vector<const TraceResult*> proposed;
    for (const auto& t : traces) {
        if (t.kind != MarkerKind::Method) continue;
        if (detail::original_year(t, index) == std::optional<int>(year))
            proposed.push_back(&t);
    }
    if (proposed.empty()) throw NoMethodsInYear(year);

    std::size_t total = 0;
    for (const TraceResult* t : proposed) {
        std::set<std::string> datasets;
        for (const auto& [paper_id, sets] : index.papers()) {
            auto paper_year = index.year_of(paper_id);
            if (!paper_year || *paper_year < year || *paper_year > year + dy) continue;
            std::size_t method_k = static_cast<std::size_t>(MarkerKind::Method);
            std::size_t dataset_k = static_cast<std::size_t>(MarkerKind::Dataset);
            if (!sets.experiment[method_k].count(t->canonical)) continue;
            datasets.insert(sets.experiment[dataset_k].begin(),
                            sets.experiment[dataset_k].end());
        }
        total += datasets.size();
    }
    return static_cast<double>(total) / static_cast<double>(proposed.size());
}

// PD(c,c'|y,dy): over methods originated by country c, papers of country c'
// in the window citing the method through an adjacent reference to its
// original. Experiment-chapter citations weigh 1, methodology 0.5; a paper
// citing in both chapters counts once at weight 1.
inline double propagation_degree_countries(const std::vector<TraceResult>& traces,
                                           const Corpus& corpus,
                                           const MarkerIndex& index,
                                           const std::string& from_country,
                                           const std::string& to_country, int year,
                                           int dy) {
    if (dy < 0) throw InvalidInput("dy must be >= 0");
    double total = 0.0;
    for (const auto& t : traces) {
        if (t.kind != MarkerKind::Method) continue;
        if (!t.original.paper_id) continue;
        const PaperRecord* original = corpus.find(*t.original.paper_id);
        if (!original) continue;
        if (std::find(original->countries.begin(), original->countries.end(),
                      from_country) == original->countries.end())
            continue;
        const auto* citations =
            index.adjacent_citations(MarkerKind::Method, t.canonical);
        if (!citations) continue;
        for (const auto& [paper_id, by_identity] : *citations) {
            const PaperRecord* citing = corpus.find(paper_id);
            if (!citing) continue;
            if (citing->year < year || citing->year > year + dy) continue;
            if (std::find(citing->countries.begin(), citing->countries.end(),
                          to_country) == citing->countries.end())
                continue;
            auto it = by_identity.find(t.original.key);
            if (it == by_identity.end()) continue;
            if (it->second.experiment) total += 1.0;
            else if (it->second.methodology) total += 0.5;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Propagation tables
// ---------------------------------------------------------------------------

struct PropagationGrid {
    int dy_max = 2;
    std::map<int, std::vector<double>> pr;  // year -> PR for dy = 0..dy_max
};

inline PropagationGrid build_pr_grid(const std::vector<TraceResult>& traces,
                                     const MarkerIndex& index, int dy_max = 2) {
    PropagationGrid grid;
    grid.dy_max = dy_max;
    std::set<int> years;
    for (const auto& t : traces)
        if (t.kind == MarkerKind::Method)
            if (auto y = detail::original_year(t, index)) years.insert(*y);
    for (int y : years) {
        std::vector<double> row;
        for (int dy = 0; dy <= dy_max; ++dy)
            row.push_back(propagation_rate_datasets(traces, index, y, dy));
        grid.pr[y] = std::move(row);
    }
    return grid;
}

struct PropagationCell {
    std::string from;
    std::string to;
    int year = 0;
    int dy = 0;
    double pd = 0.0;
};

// Every positive cell over observed countries, method-proposal years and
// dy in [0, dy_max], sorted.
inline std::vector<PropagationCell> build_pd_cells(
    const std::vector<TraceResult>& traces, const Corpus& corpus,
    const MarkerIndex& index, int dy_max = 2) {
    std::set<std::string> countries;
    for (const auto& rec : corpus.records())
        countries.insert(rec.countries.begin(), rec.countries.end());
    std::set<int> years;
    for (const auto& t : traces)
        if (t.kind == MarkerKind::Method)
            if (auto y = detail::original_year(t, index)) years.insert(*y);

    std::vector<PropagationCell> cells;
    for (const auto& from : countries)
        for (const auto& to : countries)
            for (int y : years)
                for (int dy = 0; dy <= dy_max; ++dy) {
                    double pd = propagation_degree_countries(traces, corpus, index,
                                                             from, to, y, dy);
                    if (pd > 0.0) cells.push_back({from, to, y, dy, pd});
                }
    return cells;
}

// ---------------------------------------------------------------------------
// CSV exports (fixed headers, sorted rows)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_rate(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

inline void write_proposal_rates_csv(const std::vector<ProposalRates>& by_country,
                                     const std::vector<ProposalRates>& by_venue,
                                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "scope,subject,papers,effective_methods,effective_datasets,"
           "method_rate,dataset_rate\n";
    auto emit = [&out](const char* scope, const std::vector<ProposalRates>& rows) {
        for (const auto& r : rows)
            out << scope << ',' << r.subject << ',' << r.papers << ',' << r.methods
                << ',' << r.datasets << ',' << detail::format_rate(r.method_rate)
                << ',' << detail::format_rate(r.dataset_rate) << '\n';
    };
    emit("country", by_country);
    emit("venue", by_venue);
}

inline void write_topk_csv(const std::map<int, std::vector<YearTopEntry>>& methods,
                           const std::map<int, std::vector<YearTopEntry>>& datasets,
                           const std::filesystem::path& directory) {
    std::set<int> years;
    for (const auto& [y, rows] : methods) years.insert(y);
    for (const auto& [y, rows] : datasets) years.insert(y);
    for (int year : years) {
        std::ofstream out(directory / ("topk_" + std::to_string(year) + ".csv"));
        if (!out) throw IoError("cannot write top-k table for " + std::to_string(year));
        out << "kind,rank,canonical,papers,share\n";
        auto emit = [&out](const char* kind,
                           const std::map<int, std::vector<YearTopEntry>>& table,
                           int y) {
            auto it = table.find(y);
            if (it == table.end()) return;
            int rank = 1;
            for (const auto& e : it->second)
                out << kind << ',' << rank++ << ',' << e.canonical << ',' << e.papers
                    << ',' << detail::format_rate(e.share) << '\n';
        };
        emit("Method", methods, year);
        emit("Dataset", datasets, year);
    }
}

inline void write_pr_grid_csv(const PropagationGrid& grid,
                              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "year,dy,pr\n";
    for (const auto& [year, row] : grid.pr)
        for (int dy = 0; dy < static_cast<int>(row.size()); ++dy)
            out << year << ',' << dy << ',' << detail::format_rate(row[dy]) << '\n';
}

inline void write_pd_tensor_csv(const std::vector<PropagationCell>& cells,
                                const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "from,to,year,dy,pd\n";
    for (const auto& c : cells)
        out << c.from << ',' << c.to << ',' << c.year << ',' << c.dy << ','
            << detail::format_rate(c.pd) << '\n';
}

}  // namespace litmine
