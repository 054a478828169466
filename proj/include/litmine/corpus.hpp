#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "litmine/error.hpp"

namespace litmine {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class TokenKind { Word, Number, Punct, CitationAnchor };

struct Token {
    std::string text;
    TokenKind kind = TokenKind::Word;
    int ref_id = -1;  // valid only for CitationAnchor

    bool is_anchor() const { return kind == TokenKind::CitationAnchor; }
    bool is_punct() const { return kind == TokenKind::Punct; }
};

// The four canonical body chapters. Owned conceptually by the chapters
// module; defined here because Paragraph carries the assigned label.
enum class ChapterLabel { Introduction, Methodology, Experiment, Conclusion };

inline const char* to_string(ChapterLabel l) {
    switch (l) {
        case ChapterLabel::Introduction: return "Introduction";
        case ChapterLabel::Methodology: return "Methodology";
        case ChapterLabel::Experiment: return "Experiment";
        case ChapterLabel::Conclusion: return "Conclusion";
    }
    return "?";
}

inline std::optional<ChapterLabel> chapter_from_string(const std::string& s) {
    if (s == "Introduction") return ChapterLabel::Introduction;
    if (s == "Methodology") return ChapterLabel::Methodology;
    if (s == "Experiment") return ChapterLabel::Experiment;
    if (s == "Conclusion") return ChapterLabel::Conclusion;
    return std::nullopt;
}

enum class VenueRank { A, B, C, Unranked };

inline const char* to_string(VenueRank r) {
    switch (r) {
        case VenueRank::A: return "A";
        case VenueRank::B: return "B";
        case VenueRank::C: return "C";
        case VenueRank::Unranked: return "Unranked";
    }
    return "?";
}

inline VenueRank venue_rank_from_string(const std::string& s) {
    if (s == "A") return VenueRank::A;
    if (s == "B") return VenueRank::B;
    if (s == "C") return VenueRank::C;
    return VenueRank::Unranked;
}

struct RefEntry {
    int ref_id = 0;  // unique within its paper
    std::string title;
    std::optional<int> year;
    std::optional<std::string> resolved_paper;  // in-corpus match
};

struct Paragraph {
    std::optional<std::string> heading;  // section heading this paragraph sits under
    std::string text;
    std::vector<std::vector<Token>> sentences;  // derived
    std::optional<ChapterLabel> chapter;        // filled by the chapters module
};

struct PaperRecord {
    std::string paper_id;
    std::string title;
    int year = 0;
    std::string venue;
    VenueRank venue_rank = VenueRank::Unranked;
    std::vector<std::string> countries;
    std::vector<Paragraph> paragraphs;
    std::vector<RefEntry> references;

    const RefEntry* find_reference(int ref_id) const {
        for (const auto& r : references)
            if (r.ref_id == ref_id) return &r;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Sentence splitting
// ---------------------------------------------------------------------------

namespace detail {

inline bool iequal(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

// True when the '.' ending at position i closes a protected abbreviation.
inline bool protected_abbreviation(const std::string& text, std::size_t i) {
    static const std::vector<std::string> kProtected = {
        "et al.", "Fig.", "Eq.", "e.g.", "i.e.", "vs.",
    };
    for (const auto& abbr : kProtected) {
        if (i + 1 < abbr.size()) continue;
        std::size_t start = i + 1 - abbr.size();
        if (!iequal(text.substr(start, abbr.size()), abbr)) continue;
        // The abbreviation must start a word ("vs." should not fire on "Avs.").
        if (start == 0 || std::isspace(static_cast<unsigned char>(text[start - 1])) ||
            !std::isalnum(static_cast<unsigned char>(text[start - 1])))
            return true;
    }
    // Single capital letter followed by '.' (initials: "J. Smith").
    if (i >= 1 && std::isupper(static_cast<unsigned char>(text[i - 1]))) {
        if (i == 1 || !std::isalnum(static_cast<unsigned char>(text[i - 2])))
            return true;
    }
    return false;
}

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

// Splits on '.', '?' or '!' followed by whitespace and an uppercase letter or
// digit. Protected abbreviations never split. The concatenation of the result
// reproduces the input up to inter-sentence whitespace.
inline std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '?' && c != '!') continue;
        std::size_t j = i + 1;
        if (j >= text.size() || !std::isspace(static_cast<unsigned char>(text[j])))
            continue;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j])))
            ++j;
        if (j >= text.size()) continue;
        unsigned char next = static_cast<unsigned char>(text[j]);
        if (!std::isupper(next) && !std::isdigit(next)) continue;
        if (c == '.' && detail::protected_abbreviation(text, i)) continue;
        std::string sentence = detail::trim(text.substr(start, i + 1 - start));
        if (!sentence.empty()) out.push_back(sentence);
        start = j;
    }
    std::string last = detail::trim(text.substr(start));
    if (!last.empty()) out.push_back(last);
    return out;
}

// ---------------------------------------------------------------------------
// Tokenisation
// ---------------------------------------------------------------------------

namespace detail {

inline bool word_byte(unsigned char c) {
    return std::isalnum(c) || c >= 0x80;
}

// '-' and '.' are part of a word when flanked by word characters, which keeps
// "C4.5" and "LSTM-based" intact.
inline bool internal_join(const std::string& s, std::size_t i) {
    if (s[i] != '-' && s[i] != '.') return false;
    if (i == 0 || i + 1 >= s.size()) return false;
    return word_byte(static_cast<unsigned char>(s[i - 1])) &&
           word_byte(static_cast<unsigned char>(s[i + 1]));
}

inline TokenKind classify_word(const std::string& text) {
    bool digit_seen = false;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isdigit(c)) {
            digit_seen = true;
        } else if (c != '.' && c != ',') {
            return TokenKind::Word;
        }
    }
    return digit_seen ? TokenKind::Number : TokenKind::Word;
}

}  // namespace detail

// Whitespace tokenisation with edge punctuation split off and bracketed
// integers "[12]" rewritten to citation anchors. When valid_ref_ids is given,
// bracket groups naming an unknown reference fall through to ordinary
// punctuation/number tokens, which keeps every anchor's ref_id valid for its
// paper.
inline std::vector<Token> tokenize(const std::string& sentence,
                                   const std::set<int>* valid_ref_ids = nullptr) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = sentence.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(sentence[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (c == '[') {
            std::size_t j = i + 1;
            while (j < n && std::isdigit(static_cast<unsigned char>(sentence[j]))) ++j;
            if (j > i + 1 && j < n && sentence[j] == ']') {
                int ref_id = std::stoi(sentence.substr(i + 1, j - i - 1));
                if (valid_ref_ids == nullptr || valid_ref_ids->count(ref_id)) {
                    out.push_back({sentence.substr(i, j + 1 - i),
                                   TokenKind::CitationAnchor, ref_id});
                    i = j + 1;
                    continue;
                }
            }
        }
        if (detail::word_byte(c)) {
            std::size_t j = i;
            while (j < n && (detail::word_byte(static_cast<unsigned char>(sentence[j])) ||
                             detail::internal_join(sentence, j)))
                ++j;
            std::string text = sentence.substr(i, j - i);
            out.push_back({text, detail::classify_word(text), -1});
            i = j;
        } else {
            out.push_back({std::string(1, sentence[i]), TokenKind::Punct, -1});
            ++i;
        }
    }
    return out;
}

// Fills paragraph.sentences from paragraph.text, restricting citation anchors
// to the record's actual reference ids.
inline void derive_sentences(PaperRecord& record) {
    std::set<int> valid;
    for (const auto& r : record.references) valid.insert(r.ref_id);
    for (auto& para : record.paragraphs) {
        para.sentences.clear();
        for (const auto& s : split_sentences(para.text))
            para.sentences.push_back(tokenize(s, &valid));
    }
}

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

class Corpus {
public:
    void add(PaperRecord record) {
        if (record.year < 1900 || record.year > 2100)
            throw InvalidInput("paper " + record.paper_id + ": year " +
                               std::to_string(record.year) + " outside [1900, 2100]");
        auto [it, inserted] = index_.emplace(record.paper_id, records_.size());
        if (!inserted) throw DuplicateId(record.paper_id);
        records_.push_back(std::move(record));
    }

    const std::vector<PaperRecord>& records() const { return records_; }
    std::vector<PaperRecord>& records() { return records_; }

    const PaperRecord* find(const std::string& paper_id) const {
        auto it = index_.find(paper_id);
        return it == index_.end() ? nullptr : &records_[it->second];
    }

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    // Case-insensitive exact title match after whitespace collapse. Ambiguous
    // titles resolve to the lexicographically smallest paper id.
    void resolve_references() {
        std::map<std::string, std::string> by_title;
        for (const auto& rec : records_) {
            std::string key = normalized_title(rec.title);
            auto it = by_title.find(key);
            if (it == by_title.end() || rec.paper_id < it->second)
                by_title[key] = rec.paper_id;
        }
        for (auto& rec : records_) {
            for (auto& ref : rec.references) {
                auto it = by_title.find(normalized_title(ref.title));
                if (it != by_title.end()) ref.resolved_paper = it->second;
            }
        }
    }

    static std::string normalized_title(const std::string& title) {
        std::string out;
        bool pending_space = false;
        for (unsigned char c : title) {
            if (std::isspace(c)) {
                pending_space = !out.empty();
            } else {
                if (pending_space) out.push_back(' ');
                pending_space = false;
                out.push_back(static_cast<char>(std::tolower(c)));
            }
        }
        return out;
    }

private:
    std::vector<PaperRecord> records_;
    std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Canonical line-delimited corpus format
// ---------------------------------------------------------------------------

inline nlohmann::json record_to_json(const PaperRecord& rec) {
    nlohmann::json j;
    j["paper_id"] = rec.paper_id;
    j["title"] = rec.title;
    j["year"] = rec.year;
    j["venue"] = rec.venue;
    j["venue_rank"] = to_string(rec.venue_rank);
    j["countries"] = rec.countries;
    auto& paras = j["paragraphs"] = nlohmann::json::array();
    for (const auto& p : rec.paragraphs) {
        nlohmann::json pj;
        if (p.heading) pj["heading"] = *p.heading;
        pj["text"] = p.text;
        paras.push_back(std::move(pj));
    }
    auto& refs = j["references"] = nlohmann::json::array();
    for (const auto& r : rec.references) {
        nlohmann::json rj;
        rj["ref_id"] = r.ref_id;
        rj["title"] = r.title;
        if (r.year) rj["year"] = *r.year;
        refs.push_back(std::move(rj));
    }
    return j;
}

inline PaperRecord record_from_json(const nlohmann::json& j) {
    PaperRecord rec;
    rec.paper_id = j.at("paper_id").get<std::string>();
    rec.title = j.at("title").get<std::string>();
    rec.year = j.at("year").get<int>();
    rec.venue = j.value("venue", std::string());
    rec.venue_rank = venue_rank_from_string(j.value("venue_rank", std::string("Unranked")));
    if (j.contains("countries")) {
        std::unordered_set<std::string> seen;
        for (const auto& c : j.at("countries")) {
            std::string name = c.get<std::string>();
            if (!name.empty() && seen.insert(name).second) rec.countries.push_back(name);
        }
    }
    if (j.contains("paragraphs")) {
        for (const auto& pj : j.at("paragraphs")) {
            Paragraph p;
            if (pj.contains("heading") && !pj.at("heading").is_null())
                p.heading = pj.at("heading").get<std::string>();
            p.text = pj.value("text", std::string());
            rec.paragraphs.push_back(std::move(p));
        }
    }
    if (j.contains("references")) {
        std::set<int> seen;
        for (const auto& rj : j.at("references")) {
            RefEntry r;
            r.ref_id = rj.at("ref_id").get<int>();
            r.title = rj.value("title", std::string());
            if (rj.contains("year") && !rj.at("year").is_null())
                r.year = rj.at("year").get<int>();
            if (!seen.insert(r.ref_id).second)
                throw InvalidInput("paper " + rec.paper_id + ": duplicate ref_id " +
                                   std::to_string(r.ref_id));
            rec.references.push_back(std::move(r));
        }
    }
    return rec;
}

inline void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& rec : corpus.records())
        out << record_to_json(rec).dump() << '\n';
}

inline void read_corpus_jsonl_into(Corpus& corpus, std::istream& in,
                                   const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t consumed = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            consumed += line.size() + 1;
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": " + e.what(),
                             consumed + e.byte);
        }
        corpus.add(record_from_json(j));
        consumed += line.size() + 1;
    }
}

}  // namespace litmine
