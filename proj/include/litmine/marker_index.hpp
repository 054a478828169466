#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litmine/corpus.hpp"
#include "litmine/normalize.hpp"

namespace litmine {

// Identity of a cited reference: the resolved in-corpus paper when available,
// otherwise the case/whitespace-normalised title. Originals outside the
// corpus therefore stay traceable.
struct RefIdentity {
    std::string key;                       // "id:<paper>" or "title:<normalised>"
    std::string title;                     // display form
    std::optional<std::string> paper_id;   // in-corpus match
    std::optional<int> year;
};

inline std::optional<RefIdentity> reference_identity(const Corpus& corpus,
                                                     const std::string& paper_id,
                                                     int ref_id) {
    const PaperRecord* rec = corpus.find(paper_id);
    if (!rec) return std::nullopt;
    const RefEntry* ref = rec->find_reference(ref_id);
    if (!ref) return std::nullopt;
    RefIdentity id;
    if (ref->resolved_paper) {
        const PaperRecord* original = corpus.find(*ref->resolved_paper);
        id.key = "id:" + *ref->resolved_paper;
        id.paper_id = ref->resolved_paper;
        id.title = original ? original->title : ref->title;
        id.year = original ? std::optional<int>(original->year) : ref->year;
    } else {
        id.key = "title:" + Corpus::normalized_title(ref->title);
        id.title = ref->title;
        id.year = ref->year;
    }
    return id;
}

// Chapters in which one paper cites one canonical marker through an adjacent
// reference, bucketed by the cited identity.
struct CitationChapters {
    bool experiment = false;
    bool methodology = false;
};

// Canonical-marker view of an extracted corpus: per-paper marker sets, per-
// marker citing papers and adjacent-reference citations. All analytics
// downstream of normalisation read from here.
class MarkerIndex {
public:
    struct PaperSets {
        std::array<std::set<std::string>, kNumMarkerKinds> mentioned;   // Meth+Exp
        std::array<std::set<std::string>, kNumMarkerKinds> experiment;  // Exp only
    };

    MarkerIndex() = default;

    MarkerIndex(const Corpus& corpus, const std::vector<MarkerMention>& mentions,
                const std::vector<CanonicalMarker>& canonicals) {
        std::vector<const CanonicalMarker*> of_mention(mentions.size(), nullptr);
        for (const auto& cm : canonicals)
            for (std::size_t mi : cm.mention_refs)
                of_mention.at(mi) = &cm;

        for (std::size_t mi = 0; mi < mentions.size(); ++mi) {
            const MarkerMention& m = mentions[mi];
            if (m.chapter != ChapterLabel::Methodology &&
                m.chapter != ChapterLabel::Experiment)
                continue;
            const CanonicalMarker* cm = of_mention[mi];
            if (!cm) continue;
            std::size_t k = static_cast<std::size_t>(cm->kind);

            PaperSets& sets = papers_[m.paper_id];
            sets.mentioned[k].insert(cm->canonical);
            if (m.chapter == ChapterLabel::Experiment)
                sets.experiment[k].insert(cm->canonical);
            citing_papers_[k][cm->canonical].insert(m.paper_id);
            ++mention_counts_[k][cm->canonical];

            if (m.adjacent_ref) {
                if (auto ident = reference_identity(corpus, m.paper_id, *m.adjacent_ref)) {
                    CitationChapters& ch =
                        citations_[k][cm->canonical][m.paper_id][ident->key];
                    if (m.chapter == ChapterLabel::Experiment) ch.experiment = true;
                    else ch.methodology = true;
                }
            }
        }

        for (const auto& rec : corpus.records()) {
            years_[rec.paper_id] = rec.year;
        }
    }

    const std::map<std::string, PaperSets>& papers() const { return papers_; }

    const PaperSets* sets_of(const std::string& paper_id) const {
        auto it = papers_.find(paper_id);
        return it == papers_.end() ? nullptr : &it->second;
    }

    // Distinct papers mentioning the canonical in Methodology or Experiment.
    const std::set<std::string>* citing_papers(MarkerKind kind,
                                               const std::string& canonical) const {
        const auto& m = citing_papers_[static_cast<std::size_t>(kind)];
        auto it = m.find(canonical);
        return it == m.end() ? nullptr : &it->second;
    }

    const std::map<std::string, std::set<std::string>>& citing_papers(
        MarkerKind kind) const {
        return citing_papers_[static_cast<std::size_t>(kind)];
    }

    int mention_count(MarkerKind kind, const std::string& canonical) const {
        const auto& m = mention_counts_[static_cast<std::size_t>(kind)];
        auto it = m.find(canonical);
        return it == m.end() ? 0 : it->second;
    }

    // paper -> cited identity -> chapters, for adjacent-reference mentions of
    // the canonical.
    const std::map<std::string, std::map<std::string, CitationChapters>>*
    adjacent_citations(MarkerKind kind, const std::string& canonical) const {
        const auto& m = citations_[static_cast<std::size_t>(kind)];
        auto it = m.find(canonical);
        return it == m.end() ? nullptr : &it->second;
    }

    std::optional<int> year_of(const std::string& paper_id) const {
        auto it = years_.find(paper_id);
        if (it == years_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::map<std::string, PaperSets> papers_;
    std::array<std::map<std::string, std::set<std::string>>, kNumMarkerKinds>
        citing_papers_;
    std::array<std::map<std::string, int>, kNumMarkerKinds> mention_counts_;
    std::array<std::map<std::string,
                        std::map<std::string, std::map<std::string, CitationChapters>>>,
               kNumMarkerKinds>
        citations_;
    std::map<std::string, int> years_;
};

}  // namespace litmine
