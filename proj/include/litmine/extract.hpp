#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "litmine/corpus.hpp"
#include "litmine/error.hpp"
#include "litmine/rng.hpp"

namespace litmine {

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

// Seven runtime labels. The neural training artifact "padding" has no runtime
// meaning and is deliberately not part of this set.
enum class BioTag { BM, IM, BD, ID, BC, IC, O };

constexpr int kNumBioTags = 7;

enum class MarkerKind { Method, Dataset, Metric };

constexpr int kNumMarkerKinds = 3;

inline const char* to_string(BioTag t) {
    switch (t) {
        case BioTag::BM: return "B-M";
        case BioTag::IM: return "I-M";
        case BioTag::BD: return "B-D";
        case BioTag::ID: return "I-D";
        case BioTag::BC: return "B-C";
        case BioTag::IC: return "I-C";
        case BioTag::O: return "O";
    }
    return "?";
}

inline std::optional<BioTag> bio_tag_from_string(const std::string& s) {
    if (s == "B-M") return BioTag::BM;
    if (s == "I-M") return BioTag::IM;
    if (s == "B-D") return BioTag::BD;
    if (s == "I-D") return BioTag::ID;
    if (s == "B-C") return BioTag::BC;
    if (s == "I-C") return BioTag::IC;
    if (s == "O") return BioTag::O;
    return std::nullopt;
}

inline const char* to_string(MarkerKind k) {
    switch (k) {
        case MarkerKind::Method: return "Method";
        case MarkerKind::Dataset: return "Dataset";
        case MarkerKind::Metric: return "Metric";
    }
    return "?";
}

inline std::optional<MarkerKind> marker_kind_from_string(const std::string& s) {
    if (s == "Method") return MarkerKind::Method;
    if (s == "Dataset") return MarkerKind::Dataset;
    if (s == "Metric") return MarkerKind::Metric;
    return std::nullopt;
}

inline bool is_begin(BioTag t) {
    return t == BioTag::BM || t == BioTag::BD || t == BioTag::BC;
}
inline bool is_inside(BioTag t) {
    return t == BioTag::IM || t == BioTag::ID || t == BioTag::IC;
}

inline std::optional<MarkerKind> kind_of(BioTag t) {
    switch (t) {
        case BioTag::BM:
        case BioTag::IM: return MarkerKind::Method;
        case BioTag::BD:
        case BioTag::ID: return MarkerKind::Dataset;
        case BioTag::BC:
        case BioTag::IC: return MarkerKind::Metric;
        case BioTag::O: return std::nullopt;
    }
    return std::nullopt;
}

// I-X may only follow B-X or I-X of the same kind.
inline bool transition_allowed(BioTag prev, BioTag next) {
    if (!is_inside(next)) return true;
    return (is_begin(prev) || is_inside(prev)) && kind_of(prev) == kind_of(next);
}

inline bool start_allowed(BioTag tag) { return !is_inside(tag); }

// ---------------------------------------------------------------------------
// Gazetteer
// ---------------------------------------------------------------------------

struct Gazetteer {
    std::array<std::set<std::string>, kNumMarkerKinds> names;  // lowercased

    bool contains(MarkerKind kind, const std::string& lowercased) const {
        return names[static_cast<std::size_t>(kind)].count(lowercased) > 0;
    }

    void add(MarkerKind kind, std::string lowercased) {
        if (!lowercased.empty())
            names[static_cast<std::size_t>(kind)].insert(std::move(lowercased));
    }
};

inline Gazetteer load_gazetteer(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read gazetteer " + path.string());
    Gazetteer gaz;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw InvalidInput("gazetteer row without tab: " + line);
        auto kind = marker_kind_from_string(line.substr(0, tab));
        if (!kind) throw InvalidInput("bad gazetteer kind in row: " + line);
        gaz.add(*kind, line.substr(tab + 1));
    }
    return gaz;
}

inline void save_gazetteer(const Gazetteer& gaz, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write gazetteer " + path.string());
    for (int k = 0; k < kNumMarkerKinds; ++k)
        for (const auto& name : gaz.names[k])
            out << to_string(static_cast<MarkerKind>(k)) << '\t' << name << '\n';
}

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

namespace detail {

inline std::string lowercase(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
    return out;
}

// Word shape with runs collapsed: "MNIST" -> "X", "C4.5" -> "X9.9".
inline std::string word_shape(const std::string& s) {
    std::string shape;
    char last = 0;
    for (unsigned char c : s) {
        char sym;
        if (std::isupper(c)) sym = 'X';
        else if (std::islower(c)) sym = 'x';
        else if (std::isdigit(c)) sym = '9';
        else sym = static_cast<char>(c);
        if (sym != last) shape.push_back(sym);
        last = sym;
    }
    return shape;
}

}  // namespace detail

inline std::vector<std::string> featurize(const std::vector<Token>& tokens,
                                          std::size_t position,
                                          const Gazetteer& gazetteer) {
    const Token& tok = tokens.at(position);
    const std::string lower = detail::lowercase(tok.text);

    std::vector<std::string> feats;
    feats.reserve(16);
    feats.push_back("w=" + tok.text);
    feats.push_back("lw=" + lower);
    feats.push_back("shape=" + detail::word_shape(tok.text));
    for (std::size_t len = 1; len <= 3 && len <= lower.size(); ++len) {
        feats.push_back("pre" + std::to_string(len) + "=" + lower.substr(0, len));
        feats.push_back("suf" + std::to_string(len) + "=" +
                        lower.substr(lower.size() - len));
    }
    feats.push_back("prev=" + (position == 0
                                   ? std::string("<s>")
                                   : detail::lowercase(tokens[position - 1].text)));
    feats.push_back("next=" + (position + 1 >= tokens.size()
                                   ? std::string("</s>")
                                   : detail::lowercase(tokens[position + 1].text)));
    if (gazetteer.contains(MarkerKind::Method, lower)) feats.push_back("gaz=M");
    if (gazetteer.contains(MarkerKind::Dataset, lower)) feats.push_back("gaz=D");
    if (gazetteer.contains(MarkerKind::Metric, lower)) feats.push_back("gaz=C");

    bool open_before = false, close_after = false;
    for (std::size_t i = 0; i < position; ++i)
        if (tokens[i].text == "(") open_before = true;
    for (std::size_t i = position + 1; i < tokens.size(); ++i)
        if (tokens[i].text == ")") close_after = true;
    if (open_before && close_after) feats.push_back("paren");
    return feats;
}

// ---------------------------------------------------------------------------
// Viterbi decoding
// ---------------------------------------------------------------------------

using EmissionMatrix = std::vector<std::array<double, kNumBioTags>>;
using TransitionMatrix = std::array<std::array<double, kNumBioTags>, kNumBioTags>;

// Maximum-score path under the BIO constraints. Forbidden transitions and
// forbidden starts are excluded regardless of the supplied matrices. Ties
// resolve to the lower label index.
inline std::vector<BioTag> viterbi(const EmissionMatrix& emissions,
                                   const TransitionMatrix& transitions) {
    const std::size_t n = emissions.size();
    if (n == 0) return {};
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    std::vector<std::array<double, kNumBioTags>> score(n);
    std::vector<std::array<int, kNumBioTags>> back(n);
    for (int l = 0; l < kNumBioTags; ++l) {
        BioTag tag = static_cast<BioTag>(l);
        score[0][l] = start_allowed(tag) ? emissions[0][l] : kNegInf;
        back[0][l] = -1;
    }
    for (std::size_t t = 1; t < n; ++t) {
        for (int l = 0; l < kNumBioTags; ++l) {
            double best = kNegInf;
            int arg = -1;
            for (int p = 0; p < kNumBioTags; ++p) {
                if (score[t - 1][p] == kNegInf) continue;
                if (!transition_allowed(static_cast<BioTag>(p), static_cast<BioTag>(l)))
                    continue;
                double cand = score[t - 1][p] + transitions[p][l] + emissions[t][l];
                if (cand > best) {
                    best = cand;
                    arg = p;
                }
            }
            score[t][l] = best;
            back[t][l] = arg;
        }
    }
    int best = 0;
    for (int l = 1; l < kNumBioTags; ++l)
        if (score[n - 1][l] > score[n - 1][best]) best = l;

    std::vector<BioTag> path(n);
    for (std::size_t t = n; t-- > 0;) {
        path[t] = static_cast<BioTag>(best);
        best = back[t][static_cast<int>(best)];
    }
    return path;
}

// ---------------------------------------------------------------------------
// Averaged structured perceptron
// ---------------------------------------------------------------------------

struct TaggerModel {
    std::unordered_map<std::string, std::array<double, kNumBioTags>> feature_weights;
    TransitionMatrix transition_weights{};
    bool averaged = false;
    Gazetteer gazetteer;

    double emission_score(const std::vector<std::string>& feats, BioTag tag) const {
        double s = 0.0;
        for (const auto& f : feats) {
            auto it = feature_weights.find(f);
            if (it != feature_weights.end())
                s += it->second[static_cast<std::size_t>(tag)];
        }
        return s;
    }
};

struct LabeledSentence {
    std::vector<Token> tokens;
    std::vector<BioTag> tags;
};

namespace detail {

inline EmissionMatrix emissions_for(const TaggerModel& model,
                                    const std::vector<std::vector<std::string>>& feats) {
    EmissionMatrix em(feats.size());
    for (std::size_t t = 0; t < feats.size(); ++t)
        for (int l = 0; l < kNumBioTags; ++l)
            em[t][l] = model.emission_score(feats[t], static_cast<BioTag>(l));
    return em;
}

}  // namespace detail

inline bool legal_tag_sequence(const std::vector<BioTag>& tags) {
    if (tags.empty()) return true;
    if (!start_allowed(tags[0])) return false;
    for (std::size_t t = 1; t < tags.size(); ++t)
        if (!transition_allowed(tags[t - 1], tags[t])) return false;
    return true;
}

// Collins-style averaged perceptron over the Viterbi decoder. Shuffling is
// seeded, so a fixed seed reproduces the model bit for bit.
inline TaggerModel train_tagger(const std::vector<LabeledSentence>& labeled,
                                int epochs, std::uint64_t seed,
                                const Gazetteer& gazetteer = {}) {
    if (epochs < 1) throw InvalidInput("epochs must be >= 1");
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        if (labeled[i].tokens.size() != labeled[i].tags.size())
            throw InvalidGold(i);
        if (!legal_tag_sequence(labeled[i].tags)) throw InvalidGold(i);
    }

    TaggerModel model;
    model.gazetteer = gazetteer;

    std::vector<std::vector<std::vector<std::string>>> features(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        features[i].resize(labeled[i].tokens.size());
        for (std::size_t t = 0; t < labeled[i].tokens.size(); ++t)
            features[i][t] = featurize(labeled[i].tokens, t, gazetteer);
    }

    std::unordered_map<std::string, std::array<double, kNumBioTags>> feat_accum;
    TransitionMatrix trans_accum{};
    double step = 1.0;

    auto bump = [&](const std::string& feat, BioTag tag, double delta) {
        model.feature_weights[feat][static_cast<std::size_t>(tag)] += delta;
        feat_accum[feat][static_cast<std::size_t>(tag)] += step * delta;
    };
    auto bump_trans = [&](BioTag a, BioTag b, double delta) {
        model.transition_weights[static_cast<int>(a)][static_cast<int>(b)] += delta;
        trans_accum[static_cast<int>(a)][static_cast<int>(b)] += step * delta;
    };

    std::vector<std::size_t> order(labeled.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    Rng rng(seed);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            const LabeledSentence& sent = labeled[idx];
            if (!sent.tokens.empty()) {
                EmissionMatrix em = detail::emissions_for(model, features[idx]);
                std::vector<BioTag> pred = viterbi(em, model.transition_weights);
                if (pred != sent.tags) {
                    for (std::size_t t = 0; t < sent.tokens.size(); ++t) {
                        if (pred[t] == sent.tags[t]) continue;
                        for (const auto& f : features[idx][t]) {
                            bump(f, sent.tags[t], 1.0);
                            bump(f, pred[t], -1.0);
                        }
                    }
                    for (std::size_t t = 1; t < sent.tags.size(); ++t) {
                        if (sent.tags[t - 1] == pred[t - 1] && sent.tags[t] == pred[t])
                            continue;
                        bump_trans(sent.tags[t - 1], sent.tags[t], 1.0);
                        bump_trans(pred[t - 1], pred[t], -1.0);
                    }
                }
            }
            step += 1.0;
        }
    }

    // Averaging: w_avg = w - accum / steps.
    for (auto& [feat, weights] : model.feature_weights) {
        const auto& acc = feat_accum[feat];
        for (int l = 0; l < kNumBioTags; ++l) weights[l] -= acc[l] / step;
    }
    for (int a = 0; a < kNumBioTags; ++a)
        for (int b = 0; b < kNumBioTags; ++b)
            model.transition_weights[a][b] -= trans_accum[a][b] / step;
    model.averaged = true;
    return model;
}

inline std::vector<BioTag> tag_sentence(const std::vector<Token>& tokens,
                                        const TaggerModel& model) {
    if (tokens.empty()) return {};
    std::vector<std::vector<std::string>> feats(tokens.size());
    for (std::size_t t = 0; t < tokens.size(); ++t)
        feats[t] = featurize(tokens, t, model.gazetteer);
    return viterbi(detail::emissions_for(model, feats), model.transition_weights);
}

// ---------------------------------------------------------------------------
// Mention decoding
// ---------------------------------------------------------------------------

struct MarkerMention {
    std::string paper_id;
    ChapterLabel chapter = ChapterLabel::Methodology;
    int sentence_index = 0;
    std::size_t span_begin = 0;  // token indices, [begin, end)
    std::size_t span_end = 0;
    std::string surface;
    MarkerKind kind = MarkerKind::Method;
    std::optional<int> adjacent_ref;
};

namespace detail {

// A reference is adjacent when a citation anchor sits one or two non-Punct
// positions after the span end; punctuation routinely intervenes ("SVM [3]."),
// so Punct tokens do not count toward the offset.
inline std::optional<int> adjacent_reference(const std::vector<Token>& tokens,
                                             std::size_t span_end) {
    int offset = 0;
    for (std::size_t i = span_end; i < tokens.size() && offset < 2; ++i) {
        if (tokens[i].is_punct()) continue;
        ++offset;
        if (tokens[i].is_anchor()) return tokens[i].ref_id;
    }
    return std::nullopt;
}

inline std::string join_surface(const std::vector<Token>& tokens, std::size_t begin,
                                std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) out.push_back(' ');
        out += tokens[i].text;
    }
    return out;
}

}  // namespace detail

// Maximal B-X (I-X)* runs become mentions; an orphan I-X with no compatible
// predecessor is repaired to B-X.
inline std::vector<MarkerMention> decode_mentions(const std::vector<Token>& tokens,
                                                  const std::vector<BioTag>& tags,
                                                  const std::string& paper_id,
                                                  ChapterLabel chapter,
                                                  int sentence_index) {
    std::vector<MarkerMention> mentions;
    std::size_t i = 0;
    while (i < tags.size()) {
        auto kind = kind_of(tags[i]);
        if (!kind) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        ++i;
        while (i < tags.size() && is_inside(tags[i]) && kind_of(tags[i]) == kind) ++i;
        MarkerMention m;
        m.paper_id = paper_id;
        m.chapter = chapter;
        m.sentence_index = sentence_index;
        m.span_begin = begin;
        m.span_end = i;
        m.surface = detail::join_surface(tokens, begin, i);
        m.kind = *kind;
        m.adjacent_ref = detail::adjacent_reference(tokens, i);
        mentions.push_back(std::move(m));
    }
    return mentions;
}

// ---------------------------------------------------------------------------
// Black and white lists
// ---------------------------------------------------------------------------

struct MarkerLists {
    std::set<std::string> blacklist;                              // lowercased
    std::array<std::set<std::string>, kNumMarkerKinds> whitelist; // lowercased
};

// Drops blacklisted mentions and force-adds whitelisted names found verbatim
// in the sentence but missed by the tagger.
inline std::vector<MarkerMention> apply_lists(const std::vector<Token>& tokens,
                                              std::vector<MarkerMention> mentions,
                                              const MarkerLists& lists,
                                              const std::string& paper_id,
                                              ChapterLabel chapter,
                                              int sentence_index) {
    std::vector<MarkerMention> kept;
    for (auto& m : mentions)
        if (!lists.blacklist.count(detail::lowercase(m.surface)))
            kept.push_back(std::move(m));

    auto overlaps = [&kept](std::size_t begin, std::size_t end) {
        for (const auto& m : kept)
            if (begin < m.span_end && m.span_begin < end) return true;
        return false;
    };

    for (int k = 0; k < kNumMarkerKinds; ++k) {
        for (const auto& name : lists.whitelist[k]) {
            std::vector<std::string> words;
            std::istringstream ss(name);
            for (std::string w; ss >> w;) words.push_back(w);
            if (words.empty()) continue;
            for (std::size_t start = 0; start + words.size() <= tokens.size(); ++start) {
                bool match = true;
                for (std::size_t j = 0; j < words.size(); ++j)
                    if (detail::lowercase(tokens[start + j].text) != words[j]) {
                        match = false;
                        break;
                    }
                std::size_t end = start + words.size();
                if (!match || overlaps(start, end)) continue;
                MarkerMention m;
                m.paper_id = paper_id;
                m.chapter = chapter;
                m.sentence_index = sentence_index;
                m.span_begin = start;
                m.span_end = end;
                m.surface = detail::join_surface(tokens, start, end);
                m.kind = static_cast<MarkerKind>(k);
                m.adjacent_ref = detail::adjacent_reference(tokens, end);
                kept.push_back(std::move(m));
            }
        }
    }
    std::sort(kept.begin(), kept.end(), [](const MarkerMention& a, const MarkerMention& b) {
        return std::tie(a.span_begin, a.span_end, a.kind) <
               std::tie(b.span_begin, b.span_end, b.kind);
    });
    return kept;
}

// ---------------------------------------------------------------------------
// Evaluation (exact-span matching, per kind)
// ---------------------------------------------------------------------------

struct PrfScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t gold = 0;
    std::size_t predicted = 0;
    std::size_t matched = 0;
};

struct TaggerEvaluation {
    std::array<PrfScores, kNumMarkerKinds> per_kind;
    PrfScores overall;
};

inline TaggerEvaluation evaluate_mentions(
    const std::vector<std::vector<MarkerMention>>& gold,
    const std::vector<std::vector<MarkerMention>>& predicted) {
    if (gold.size() != predicted.size())
        throw InvalidInput("evaluation requires aligned sentence lists");
    TaggerEvaluation eval;
    auto key = [](const MarkerMention& m) {
        return std::tuple(m.span_begin, m.span_end, m.kind);
    };
    for (std::size_t s = 0; s < gold.size(); ++s) {
        std::set<std::tuple<std::size_t, std::size_t, MarkerKind>> gold_keys;
        for (const auto& g : gold[s]) gold_keys.insert(key(g));
        for (const auto& g : gold[s])
            ++eval.per_kind[static_cast<std::size_t>(g.kind)].gold;
        for (const auto& p : predicted[s]) {
            auto& scores = eval.per_kind[static_cast<std::size_t>(p.kind)];
            ++scores.predicted;
            if (gold_keys.erase(key(p)) > 0) ++scores.matched;
        }
    }
    auto finish = [](PrfScores& s) {
        s.precision = s.predicted ? static_cast<double>(s.matched) / s.predicted : 0.0;
        s.recall = s.gold ? static_cast<double>(s.matched) / s.gold : 0.0;
        s.f1 = (s.precision + s.recall) > 0
                   ? 2 * s.precision * s.recall / (s.precision + s.recall)
                   : 0.0;
    };
    for (auto& s : eval.per_kind) {
        eval.overall.gold += s.gold;
        eval.overall.predicted += s.predicted;
        eval.overall.matched += s.matched;
        finish(s);
    }
    finish(eval.overall);
    return eval;
}

// ---------------------------------------------------------------------------
// Labeled data input (one sentence per line, token/TAG pairs)
// ---------------------------------------------------------------------------

inline Token token_from_surface(const std::string& text) {
    std::vector<Token> toks = tokenize(text);
    if (toks.size() == 1) return toks[0];
    return {text, TokenKind::Word, -1};
}

inline std::vector<LabeledSentence> load_labeled_sentences(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read labeled data " + path.string());
    std::vector<LabeledSentence> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        LabeledSentence sent;
        std::istringstream ss(line);
        for (std::string pair; ss >> pair;) {
            std::size_t slash = pair.rfind('/');
            if (slash == std::string::npos || slash == 0)
                throw InvalidInput("bad token/TAG pair at line " +
                                   std::to_string(line_no) + ": " + pair);
            auto tag = bio_tag_from_string(pair.substr(slash + 1));
            if (!tag)
                throw InvalidInput("bad tag at line " + std::to_string(line_no) +
                                   ": " + pair);
            sent.tokens.push_back(token_from_surface(pair.substr(0, slash)));
            sent.tags.push_back(*tag);
        }
        out.push_back(std::move(sent));
    }
    return out;
}

inline void save_labeled_sentences(const std::vector<LabeledSentence>& sentences,
                                   const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write labeled data " + path.string());
    for (const auto& sent : sentences) {
        for (std::size_t t = 0; t < sent.tokens.size(); ++t) {
            if (t > 0) out << ' ';
            out << sent.tokens[t].text << '/' << to_string(sent.tags[t]);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Model serialisation (versioned, sorted rows)
// ---------------------------------------------------------------------------

inline void save_tagger_model(const TaggerModel& model,
                              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write tagger model " + path.string());
    out << "litmine-tagger-model 1\n";
    out << "averaged\t" << (model.averaged ? 1 : 0) << '\n';
    char buf[64];
    std::map<std::string, std::array<double, kNumBioTags>> sorted(
        model.feature_weights.begin(), model.feature_weights.end());
    for (const auto& [feat, weights] : sorted)
        for (int l = 0; l < kNumBioTags; ++l) {
            if (weights[l] == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%.17g", weights[l]);
            out << "feat\t" << feat << '\t' << to_string(static_cast<BioTag>(l))
                << '\t' << buf << '\n';
        }
    for (int a = 0; a < kNumBioTags; ++a)
        for (int b = 0; b < kNumBioTags; ++b) {
            if (model.transition_weights[a][b] == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%.17g", model.transition_weights[a][b]);
            out << "trans\t" << to_string(static_cast<BioTag>(a)) << '\t'
                << to_string(static_cast<BioTag>(b)) << '\t' << buf << '\n';
        }
    for (int k = 0; k < kNumMarkerKinds; ++k)
        for (const auto& name : model.gazetteer.names[k])
            out << "gaz\t" << to_string(static_cast<MarkerKind>(k)) << '\t' << name
                << '\n';
}

inline TaggerModel load_tagger_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read tagger model " + path.string());
    std::string header;
    std::getline(in, header);
    if (header != "litmine-tagger-model 1")
        throw InvalidInput("unsupported tagger model header: " + header);
    TaggerModel model;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string kind;
        std::getline(ss, kind, '\t');
        if (kind == "averaged") {
            int v = 0;
            ss >> v;
            model.averaged = v != 0;
        } else if (kind == "feat") {
            std::string feat, label;
            std::getline(ss, feat, '\t');
            std::getline(ss, label, '\t');
            auto tag = bio_tag_from_string(label);
            if (!tag) throw InvalidInput("bad tag in model row: " + line);
            double w = 0;
            ss >> w;
            model.feature_weights[feat][static_cast<std::size_t>(*tag)] = w;
        } else if (kind == "trans") {
            std::string a, b;
            std::getline(ss, a, '\t');
            std::getline(ss, b, '\t');
            auto ta = bio_tag_from_string(a), tb = bio_tag_from_string(b);
            if (!ta || !tb) throw InvalidInput("bad tag in model row: " + line);
            double w = 0;
            ss >> w;
            model.transition_weights[static_cast<int>(*ta)][static_cast<int>(*tb)] = w;
        } else if (kind == "gaz") {
            std::string kname, name;
            std::getline(ss, kname, '\t');
            std::getline(ss, name, '\t');
            auto mk = marker_kind_from_string(kname);
            if (!mk) throw InvalidInput("bad kind in model row: " + line);
            model.gazetteer.add(*mk, name);
        } else {
            throw InvalidInput("bad row kind in tagger model: " + kind);
        }
    }
    return model;
}

}  // namespace litmine
