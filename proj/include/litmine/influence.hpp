#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litmine/cluster.hpp"
#include "litmine/error.hpp"
#include "litmine/marker_index.hpp"
#include "litmine/trace.hpp"

namespace litmine {

// ---------------------------------------------------------------------------
// Scene assignment and distributions
// ---------------------------------------------------------------------------

using Distribution = std::vector<double>;

// The paper's distinct research scenes mapped to scene-cluster ids.
inline std::vector<int> paper_scene_clusters(const MarkerIndex::PaperSets& sets,
                                             const NamedClustering& metric_clusters,
                                             const NamedClustering& scene_clusters) {
    constexpr std::size_t kD = static_cast<std::size_t>(MarkerKind::Dataset);
    constexpr std::size_t kC = static_cast<std::size_t>(MarkerKind::Metric);
    std::set<std::string> scenes;
    for (const auto& dataset : sets.mentioned[kD])
        for (const auto& metric : sets.mentioned[kC])
            if (auto mc = metric_clusters.cluster_of(metric))
                scenes.insert(SceneId{dataset, *mc}.key());
    std::vector<int> out;
    for (const auto& key : scenes)
        if (auto cluster = scene_clusters.cluster_of(key)) out.push_back(*cluster);
    return out;
}

// Argmax-occurrence scene cluster; ties go to the lowest cluster id; papers
// without scenes stay unassigned.
inline std::optional<int> assign_scene_cluster(const std::vector<int>& occurrences) {
    if (occurrences.empty()) return std::nullopt;
    std::map<int, int> counts;
    for (int c : occurrences) ++counts[c];
    int best = counts.begin()->first;
    int best_count = counts.begin()->second;
    for (const auto& [cluster, count] : counts)
        if (count > best_count) {
            best = cluster;
            best_count = count;
        }
    return best;
}

// Normalised histogram of the paper's scene occurrences over all clusters.
inline Distribution scene_distribution(const std::vector<int>& occurrences,
                                       int num_clusters,
                                       const std::string& paper_id = "") {
    if (occurrences.empty()) throw NoScenes(paper_id);
    Distribution dist(static_cast<std::size_t>(num_clusters), 0.0);
    for (int c : occurrences) dist.at(static_cast<std::size_t>(c)) += 1.0;
    double total = static_cast<double>(occurrences.size());
    for (double& v : dist) v /= total;
    return dist;
}

// paper -> (assigned cluster, distribution) for every paper with scenes.
struct SceneAssignment {
    std::map<std::string, int> cluster_of;
    std::map<std::string, Distribution> distribution_of;
    int num_clusters = 0;
};

inline SceneAssignment assign_all_scenes(const MarkerIndex& index,
                                         const NamedClustering& metric_clusters,
                                         const NamedClustering& scene_clusters) {
    SceneAssignment out;
    out.num_clusters = scene_clusters.k;
    for (const auto& [paper_id, sets] : index.papers()) {
        std::vector<int> occ = paper_scene_clusters(sets, metric_clusters, scene_clusters);
        if (occ.empty()) continue;
        out.cluster_of[paper_id] = *assign_scene_cluster(occ);
        out.distribution_of[paper_id] =
            scene_distribution(occ, scene_clusters.k, paper_id);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Jensen-Shannon divergence (base-2 logarithms, range [0, 1])
// ---------------------------------------------------------------------------

inline double js_divergence(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size())
        throw InvalidInput("distributions have different dimensions");
    double jsd = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double m = 0.5 * (p[i] + q[i]);
        if (p[i] > 0.0) jsd += 0.5 * p[i] * std::log2(p[i] / m);
        if (q[i] > 0.0) jsd += 0.5 * q[i] * std::log2(q[i] / m);
    }
    return jsd;
}

// ---------------------------------------------------------------------------
// Influencing degrees (scene clusters and effective methods)
// ---------------------------------------------------------------------------

// A paper cites method m when one of its mentions of m carries an adjacent
// reference resolving to m's traced original.
inline std::set<std::string> papers_citing_method(const TraceResult& trace,
                                                  const MarkerIndex& index) {
    std::set<std::string> out;
    const auto* citations = index.adjacent_citations(MarkerKind::Method, trace.canonical);
    if (!citations) return out;
    for (const auto& [paper_id, by_identity] : *citations)
        if (by_identity.count(trace.original.key)) out.insert(paper_id);
    return out;
}

constexpr int kInfluenceWindowYears = 3;

// IDR_s: mean JS divergence between papers of scene cluster s and the papers
// (of other clusters) proposing the effective methods they cite within the
// window. Undefined when no influencing pair exists.
inline std::optional<double> idr_scene(int s, const SceneAssignment& assignment,
                                       const std::vector<TraceResult>& traces,
                                       const MarkerIndex& index) {
    // Citing paper -> set of originating papers in other clusters.
    std::map<std::string, std::set<std::string>> influencers;
    for (const auto& t : traces) {
        if (t.kind != MarkerKind::Method || !t.original.paper_id) continue;
        const std::string& original = *t.original.paper_id;
        auto oc = assignment.cluster_of.find(original);
        if (oc == assignment.cluster_of.end()) continue;
        auto original_year = index.year_of(original);
        if (!original_year) continue;
        for (const auto& citing : papers_citing_method(t, index)) {
            auto cc = assignment.cluster_of.find(citing);
            if (cc == assignment.cluster_of.end() || cc->second != s) continue;
            if (oc->second == s) continue;  // influence comes from other clusters
            auto citing_year = index.year_of(citing);
            if (!citing_year) continue;
            int gap = *citing_year - *original_year;
            if (gap < 0 || gap > kInfluenceWindowYears) continue;
            influencers[citing].insert(original);
        }
    }
    double total = 0.0;
    std::size_t pairs = 0;
    for (const auto& [citing, originals] : influencers) {
        const Distribution& d_citing = assignment.distribution_of.at(citing);
        for (const auto& original : originals) {
            total += js_divergence(d_citing, assignment.distribution_of.at(original));
            ++pairs;
        }
    }
    if (pairs == 0) return std::nullopt;
    return total / static_cast<double>(pairs);
}

struct MethodInfluence {
    std::string canonical;
    std::string original_paper;
    int scene_cluster = 0;
    double id = 0.0;                 // Eq. 2
    std::optional<double> idr;       // Eq. 3; undefined without citing papers
    std::size_t citing_papers = 0;   // |L_\s(m)|
};

// ID_m and IDR_m for one traced method whose original has an assigned scene
// cluster. Returns nothing when the original is unresolved or unassigned.
inline std::optional<MethodInfluence> id_method(const TraceResult& trace,
                                                const SceneAssignment& assignment,
                                                const MarkerIndex& index) {
    if (trace.kind != MarkerKind::Method || !trace.original.paper_id)
        return std::nullopt;
    const std::string& original = *trace.original.paper_id;
    auto oc = assignment.cluster_of.find(original);
    if (oc == assignment.cluster_of.end()) return std::nullopt;
    auto original_year = index.year_of(original);
    if (!original_year) return std::nullopt;

    MethodInfluence result;
    result.canonical = trace.canonical;
    result.original_paper = original;
    result.scene_cluster = oc->second;

    const Distribution& d_original = assignment.distribution_of.at(original);
    for (const auto& citing : papers_citing_method(trace, index)) {
        auto cc = assignment.cluster_of.find(citing);
        if (cc == assignment.cluster_of.end() || cc->second == oc->second) continue;
        auto citing_year = index.year_of(citing);
        if (!citing_year) continue;
        int gap = *citing_year - *original_year;
        if (gap < 0 || gap > kInfluenceWindowYears) continue;
        result.id += js_divergence(d_original, assignment.distribution_of.at(citing));
        ++result.citing_papers;
    }
    if (result.citing_papers > 0)
        result.idr = result.id / static_cast<double>(result.citing_papers);
    return result;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct YearlyMax {
    int year = 0;
    std::string method;
    std::string venue;  // of the original paper
    double value = 0.0;
};

// The method with the largest score per original-paper year; ties go to the
// lexicographically smallest method.
template <typename Score>
inline std::vector<YearlyMax> yearly_maxima(const std::vector<MethodInfluence>& scores,
                                            const Corpus& corpus, Score&& score_of) {
    std::map<int, YearlyMax> best;
    for (const auto& s : scores) {
        auto value = score_of(s);
        if (!value) continue;
        const PaperRecord* original = corpus.find(s.original_paper);
        if (!original) continue;
        YearlyMax cand{original->year, s.canonical, original->venue, *value};
        auto it = best.find(cand.year);
        if (it == best.end() || cand.value > it->second.value ||
            (cand.value == it->second.value && cand.method < it->second.method))
            best[cand.year] = cand;
    }
    std::vector<YearlyMax> out;
    for (const auto& [year, row] : best) out.push_back(row);
    return out;
}

namespace influence_detail {

inline std::string format_score(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace influence_detail

// influence.csv: scope (scene|method), id, ID, IDR, n_pairs.
inline void write_influence_csv(
    const std::vector<std::pair<int, std::optional<double>>>& scene_scores,
    const std::vector<MethodInfluence>& method_scores,
    const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "scope,id,ID,IDR,n_pairs\n";
    for (const auto& [cluster, idr] : scene_scores) {
        out << "scene," << cluster << ",,";
        if (idr) out << influence_detail::format_score(*idr);
        out << ",\n";
    }
    for (const auto& m : method_scores) {
        out << "method," << m.canonical << ','
            << influence_detail::format_score(m.id) << ',';
        if (m.idr) out << influence_detail::format_score(*m.idr);
        out << ',' << m.citing_papers << '\n';
    }
}

inline void write_yearly_max_csv(const std::vector<YearlyMax>& id_rows,
                                 const std::vector<YearlyMax>& idr_rows,
                                 const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "score,year,method,venue,value\n";
    for (const auto& r : id_rows)
        out << "ID," << r.year << ',' << r.method << ',' << r.venue << ','
            << influence_detail::format_score(r.value) << '\n';
    for (const auto& r : idr_rows)
        out << "IDR," << r.year << ',' << r.method << ',' << r.venue << ','
            << influence_detail::format_score(r.value) << '\n';
}

}  // namespace litmine
