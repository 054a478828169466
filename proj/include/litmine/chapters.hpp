#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "litmine/corpus.hpp"
#include "litmine/error.hpp"

namespace litmine {

constexpr int kNumChapterLabels = 4;

inline constexpr std::array<ChapterLabel, kNumChapterLabels> kChapterLabels = {
    ChapterLabel::Introduction, ChapterLabel::Methodology,
    ChapterLabel::Experiment, ChapterLabel::Conclusion};

// ---------------------------------------------------------------------------
// Heading rules
// ---------------------------------------------------------------------------

// Keyword match on the lowercased heading, first match wins in group order.
// Related work and background count as front matter. position_fraction is
// part of the contract (chapter index / (count - 1)) but the current rule set
// is keyword-only.
inline std::optional<ChapterLabel> classify_by_rules(
    const std::string& heading, [[maybe_unused]] double position_fraction = 0.0) {
    std::string h;
    h.reserve(heading.size());
    for (unsigned char c : heading) h.push_back(static_cast<char>(std::tolower(c)));

    struct Rule {
        const char* keyword;
        ChapterLabel label;
    };
    static const Rule kRules[] = {
        {"introduction", ChapterLabel::Introduction},
        {"method", ChapterLabel::Methodology},
        {"approach", ChapterLabel::Methodology},
        {"model", ChapterLabel::Methodology},
        {"framework", ChapterLabel::Methodology},
        {"algorithm", ChapterLabel::Methodology},
        {"experiment", ChapterLabel::Experiment},
        {"evaluation", ChapterLabel::Experiment},
        {"result", ChapterLabel::Experiment},
        {"empirical", ChapterLabel::Experiment},
        {"conclusion", ChapterLabel::Conclusion},
        {"discussion", ChapterLabel::Conclusion},
        {"future work", ChapterLabel::Conclusion},
        {"related work", ChapterLabel::Introduction},
        {"background", ChapterLabel::Introduction},
        {"preliminar", ChapterLabel::Introduction},
    };
    for (const auto& rule : kRules)
        if (h.find(rule.keyword) != std::string::npos) return rule.label;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Paragraph classifier (multinomial bag of unigrams, additive smoothing)
// ---------------------------------------------------------------------------

struct ParagraphClassifierModel {
    std::map<std::string, std::size_t> vocabulary;              // term -> index
    std::array<double, kNumChapterLabels> log_priors{};
    std::array<std::vector<double>, kNumChapterLabels> log_likelihoods;
    double smoothing = 1.0;
};

namespace detail {

inline std::vector<std::string> classifier_terms(const std::string& text) {
    std::vector<std::string> terms;
    for (const Token& tok : tokenize(text)) {
        if (tok.kind == TokenKind::Punct || tok.kind == TokenKind::CitationAnchor)
            continue;
        std::string lower;
        lower.reserve(tok.text.size());
        for (unsigned char c : tok.text) lower.push_back(static_cast<char>(std::tolower(c)));
        terms.push_back(std::move(lower));
    }
    return terms;
}

}  // namespace detail

inline ParagraphClassifierModel train_fallback(
    const std::vector<std::pair<std::string, ChapterLabel>>& labeled,
    double smoothing = 1.0) {
    if (smoothing <= 0.0) throw InvalidInput("smoothing must be positive");

    std::array<std::size_t, kNumChapterLabels> doc_counts{};
    std::array<std::map<std::string, std::size_t>, kNumChapterLabels> term_counts;
    std::array<std::size_t, kNumChapterLabels> token_totals{};
    std::map<std::string, std::size_t> vocabulary;

    for (const auto& [text, label] : labeled) {
        std::size_t li = static_cast<std::size_t>(label);
        ++doc_counts[li];
        for (const auto& term : detail::classifier_terms(text)) {
            ++term_counts[li][term];
            ++token_totals[li];
            vocabulary.emplace(term, 0);
        }
    }
    for (std::size_t li = 0; li < kNumChapterLabels; ++li)
        if (doc_counts[li] == 0)
            throw InsufficientData(to_string(kChapterLabels[li]));

    ParagraphClassifierModel model;
    model.smoothing = smoothing;
    std::size_t next = 0;
    for (auto& [term, index] : vocabulary) index = next++;
    model.vocabulary = std::move(vocabulary);

    const double vocab_size = static_cast<double>(model.vocabulary.size());
    for (std::size_t li = 0; li < kNumChapterLabels; ++li) {
        model.log_priors[li] = std::log(static_cast<double>(doc_counts[li]) /
                                        static_cast<double>(labeled.size()));
        auto& row = model.log_likelihoods[li];
        row.assign(model.vocabulary.size(), 0.0);
        double denom = static_cast<double>(token_totals[li]) + smoothing * vocab_size;
        for (const auto& [term, index] : model.vocabulary) {
            auto it = term_counts[li].find(term);
            double count = it == term_counts[li].end()
                               ? 0.0
                               : static_cast<double>(it->second);
            row[index] = std::log((count + smoothing) / denom);
        }
    }
    return model;
}

// Argmax of log prior plus summed in-vocabulary log likelihoods. Ties resolve
// in label order Introduction < Methodology < Experiment < Conclusion.
inline ChapterLabel classify_paragraph(const std::string& text,
                                       const ParagraphClassifierModel& model) {
    std::array<double, kNumChapterLabels> scores = model.log_priors;
    for (const auto& term : detail::classifier_terms(text)) {
        auto it = model.vocabulary.find(term);
        if (it == model.vocabulary.end()) continue;  // out-of-vocabulary ignored
        for (std::size_t li = 0; li < kNumChapterLabels; ++li)
            scores[li] += model.log_likelihoods[li][it->second];
    }
    std::size_t best = 0;
    for (std::size_t li = 1; li < kNumChapterLabels; ++li)
        if (scores[li] > scores[best]) best = li;
    return kChapterLabels[best];
}

// Plurality vote; ties go to the tied label first seen in the list.
inline ChapterLabel vote_chapter(const std::vector<ChapterLabel>& labels) {
    if (labels.empty()) throw EmptyInput("vote over no labels");
    std::array<std::size_t, kNumChapterLabels> counts{};
    std::array<std::size_t, kNumChapterLabels> first_seen{};
    first_seen.fill(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::size_t li = static_cast<std::size_t>(labels[i]);
        ++counts[li];
        if (first_seen[li] == labels.size()) first_seen[li] = i;
    }
    std::size_t best = static_cast<std::size_t>(labels[0]);
    for (std::size_t li = 0; li < kNumChapterLabels; ++li) {
        if (counts[li] == 0) continue;
        if (counts[li] > counts[best] ||
            (counts[li] == counts[best] && first_seen[li] < first_seen[best]))
            best = li;
    }
    return kChapterLabels[best];
}

// ---------------------------------------------------------------------------
// Combined chapter labelling
// ---------------------------------------------------------------------------

// A chapter is a maximal run of paragraphs under the same heading.
struct ChapterSpan {
    std::size_t begin = 0;  // paragraph indices [begin, end)
    std::size_t end = 0;
    std::optional<std::string> heading;
};

inline std::vector<ChapterSpan> chapter_spans(const PaperRecord& record) {
    std::vector<ChapterSpan> spans;
    for (std::size_t i = 0; i < record.paragraphs.size(); ++i) {
        if (!spans.empty() && spans.back().heading == record.paragraphs[i].heading) {
            spans.back().end = i + 1;
        } else {
            spans.push_back({i, i + 1, record.paragraphs[i].heading});
        }
    }
    return spans;
}

// Rules first; unmatched chapters fall back to per-paragraph classification
// plus voting. Rule-matched chapters keep the rule label unconditionally.
inline PaperRecord classify_body(PaperRecord record,
                                 const ParagraphClassifierModel& model) {
    std::vector<ChapterSpan> spans = chapter_spans(record);
    for (std::size_t ci = 0; ci < spans.size(); ++ci) {
        const ChapterSpan& span = spans[ci];
        double fraction = spans.size() > 1
                              ? static_cast<double>(ci) /
                                    static_cast<double>(spans.size() - 1)
                              : 0.0;
        std::optional<ChapterLabel> label;
        if (span.heading) label = classify_by_rules(*span.heading, fraction);
        if (!label) {
            std::vector<ChapterLabel> votes;
            for (std::size_t pi = span.begin; pi < span.end; ++pi)
                votes.push_back(classify_paragraph(record.paragraphs[pi].text, model));
            label = vote_chapter(votes);
        }
        for (std::size_t pi = span.begin; pi < span.end; ++pi)
            record.paragraphs[pi].chapter = label;
    }
    return record;
}

// ---------------------------------------------------------------------------
// Model serialisation (versioned flat key-value text, sorted)
// ---------------------------------------------------------------------------

inline void save_chapter_model(const ParagraphClassifierModel& model,
                               const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    char buf[64];
    out << "litmine-chapter-model 1\n";
    std::snprintf(buf, sizeof buf, "%.17g", model.smoothing);
    out << "smoothing\t" << buf << '\n';
    for (std::size_t li = 0; li < kNumChapterLabels; ++li) {
        std::snprintf(buf, sizeof buf, "%.17g", model.log_priors[li]);
        out << "prior\t" << to_string(kChapterLabels[li]) << '\t' << buf << '\n';
    }
    for (const auto& [term, index] : model.vocabulary)
        for (std::size_t li = 0; li < kNumChapterLabels; ++li) {
            std::snprintf(buf, sizeof buf, "%.17g", model.log_likelihoods[li][index]);
            out << "term\t" << term << '\t' << to_string(kChapterLabels[li]) << '\t'
                << buf << '\n';
        }
}

inline ParagraphClassifierModel load_chapter_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::string header;
    std::getline(in, header);
    if (header != "litmine-chapter-model 1")
        throw InvalidInput("unsupported chapter model header: " + header);

    ParagraphClassifierModel model;
    std::vector<std::pair<std::string, std::array<double, kNumChapterLabels>>> rows;
    std::map<std::string, std::array<double, kNumChapterLabels>> by_term;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string kind;
        std::getline(ss, kind, '\t');
        if (kind == "smoothing") {
            ss >> model.smoothing;
        } else if (kind == "prior") {
            std::string label_name;
            std::getline(ss, label_name, '\t');
            auto label = chapter_from_string(label_name);
            if (!label) throw InvalidInput("bad label in model: " + label_name);
            ss >> model.log_priors[static_cast<std::size_t>(*label)];
        } else if (kind == "term") {
            std::string term, label_name;
            std::getline(ss, term, '\t');
            std::getline(ss, label_name, '\t');
            auto label = chapter_from_string(label_name);
            if (!label) throw InvalidInput("bad label in model: " + label_name);
            double w = 0;
            ss >> w;
            by_term[term][static_cast<std::size_t>(*label)] = w;
        } else {
            throw InvalidInput("bad row kind in chapter model: " + kind);
        }
    }
    std::size_t next = 0;
    for (auto& row : model.log_likelihoods) row.assign(by_term.size(), 0.0);
    for (const auto& [term, weights] : by_term) {
        model.vocabulary.emplace(term, next);
        for (std::size_t li = 0; li < kNumChapterLabels; ++li)
            model.log_likelihoods[li][next] = weights[li];
        ++next;
    }
    return model;
}

}  // namespace litmine
