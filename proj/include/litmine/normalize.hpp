#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litmine/error.hpp"
#include "litmine/extract.hpp"

namespace litmine {

// Raw surface form -> corpus-wide mention count. Counts drive the
// "most frequent original casing" unification.
using SurfaceCounts = std::map<std::string, int>;

struct NormalizeOptions {
    // Names whose digits are meaningful and must not be stripped.
    std::set<std::string> protected_names = {"C4.5", "ID3"};
};

struct AbbrPairing {
    std::string abbreviation;
    std::string full_name;

    std::string combined() const { return abbreviation + " (" + full_name + ")"; }
};

struct CanonicalMarker {
    MarkerKind kind = MarkerKind::Method;
    std::string canonical;
    std::set<std::string> aliases;        // raw surface forms
    std::vector<std::size_t> mention_refs;  // indices into the source mention list
};

// ---------------------------------------------------------------------------
// Word-level helpers
//
// Phrases split into whitespace units, units into hyphen-joined parts.
// "LSTM-based" is the two parts [LSTM, based]; "Long Short-Term Memory" is
// [Long, Short, Term, Memory]. All word-level rules and initialisms operate
// on parts.
// ---------------------------------------------------------------------------

namespace norm_detail {

using detail::lowercase;

struct Unit {
    std::vector<std::string> parts;  // hyphen-joined fragments
};

inline std::vector<Unit> split_units(const std::string& phrase) {
    std::vector<Unit> units;
    std::string word;
    auto flush_part = [&](Unit& unit) {
        if (!word.empty()) unit.parts.push_back(word);
        word.clear();
    };
    Unit current;
    for (unsigned char c : phrase) {
        if (std::isspace(c)) {
            flush_part(current);
            if (!current.parts.empty()) units.push_back(std::move(current));
            current = Unit{};
        } else if (c == '-') {
            flush_part(current);
        } else {
            word.push_back(static_cast<char>(c));
        }
    }
    flush_part(current);
    if (!current.parts.empty()) units.push_back(std::move(current));
    return units;
}

inline std::string join_units(const std::vector<Unit>& units) {
    std::string out;
    for (const auto& unit : units) {
        if (unit.parts.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        for (std::size_t i = 0; i < unit.parts.size(); ++i) {
            if (i > 0) out.push_back('-');
            out += unit.parts[i];
        }
    }
    return out;
}

inline std::size_t part_count(const std::string& phrase) {
    std::size_t n = 0;
    for (const auto& unit : split_units(phrase)) n += unit.parts.size();
    return n;
}

inline bool all_lower_word(const std::string& w) {
    bool has_alpha = false;
    for (unsigned char c : w) {
        if (std::isupper(c)) return false;
        if (std::isalpha(c)) has_alpha = true;
    }
    return has_alpha;
}

inline bool all_upper_word(const std::string& w) {
    bool has_upper = false;
    for (unsigned char c : w) {
        if (std::islower(c)) return false;
        if (std::isupper(c)) has_upper = true;
    }
    return has_upper;
}

inline bool capitalized_word(const std::string& w) {
    for (unsigned char c : w)
        if (std::isalpha(c)) return std::isupper(c) != 0;
    return false;
}

// Keeps only parts satisfying the predicate; a filter that would erase the
// whole phrase leaves it unchanged.
template <typename Pred>
inline std::string filter_parts(const std::string& phrase, Pred&& keep) {
    std::vector<Unit> units = split_units(phrase);
    std::vector<Unit> filtered;
    for (const auto& unit : units) {
        Unit f;
        for (const auto& p : unit.parts)
            if (keep(p)) f.parts.push_back(p);
        if (!f.parts.empty()) filtered.push_back(std::move(f));
    }
    if (filtered.empty()) return phrase;
    return join_units(filtered);
}

// First letter of each part; all letters of a fully-uppercase part.
inline std::string initialism(const std::string& phrase) {
    std::string out;
    for (const auto& unit : split_units(phrase)) {
        for (const auto& part : unit.parts) {
            if (all_upper_word(part)) {
                for (unsigned char c : part)
                    if (std::isalpha(c)) out.push_back(static_cast<char>(c));
            } else {
                for (unsigned char c : part)
                    if (std::isalpha(c)) {
                        out.push_back(static_cast<char>(c));
                        break;
                    }
            }
        }
    }
    return out;
}

inline std::string strip_digits_word(const std::string& w,
                                     const std::set<std::string>& protected_names) {
    for (const auto& p : protected_names)
        if (detail::lowercase(p) == lowercase(w)) return w;
    std::string out;
    for (unsigned char c : w)
        if (!std::isdigit(c)) out.push_back(static_cast<char>(c));
    // Strip separators left dangling by digit removal ("ResNet-" -> "ResNet").
    while (!out.empty() && (out.back() == '-' || out.back() == '.')) out.pop_back();
    while (!out.empty() && (out.front() == '-' || out.front() == '.')) out.erase(0, 1);
    return out;
}

}  // namespace norm_detail

// ---------------------------------------------------------------------------
// Normalisation context
// ---------------------------------------------------------------------------

class NormContext {
public:
    NormContext(const SurfaceCounts& counts, NormalizeOptions options = {})
        : counts_(counts), options_(std::move(options)) {
        for (const auto& [raw, count] : counts_)
            lower_raws_.insert(norm_detail::lowercase(raw));
        for (const auto& [raw, count] : counts_) {
            std::string base = rule1(raw);
            if (base.empty()) continue;
            base_forms_[raw] = base;
            casing_groups_[norm_detail::lowercase(base)][base] += count;
        }
    }

    const NormalizeOptions& options() const { return options_; }

    // Rule 1: strip digits (protected names excepted) and singularise a
    // trailing plural on the last word.
    std::string rule1(const std::string& surface) const {
        std::vector<norm_detail::Unit> units = norm_detail::split_units(surface);
        std::vector<norm_detail::Unit> kept;
        for (auto& unit : units) {
            norm_detail::Unit u;
            for (auto& p : unit.parts) {
                std::string s = norm_detail::strip_digits_word(p, options_.protected_names);
                if (!s.empty()) u.parts.push_back(std::move(s));
            }
            if (!u.parts.empty()) kept.push_back(std::move(u));
        }
        if (kept.empty()) return surface;
        std::string& last = kept.back().parts.back();
        last = singularise(last, norm_detail::join_units(kept));
        return norm_detail::join_units(kept);
    }

    // Rule 2: unify case-insensitive duplicates to the most frequent original
    // casing; frequency ties go to the lexicographically smallest form.
    std::string unify_casing(const std::string& form) const {
        auto group = casing_groups_.find(norm_detail::lowercase(form));
        if (group == casing_groups_.end()) return form;
        const std::string* best = nullptr;
        int best_count = -1;
        for (const auto& [variant, count] : group->second) {
            if (count > best_count) {
                best = &variant;
                best_count = count;
            }
        }
        return best ? *best : form;
    }

    // Abbreviation side of rule 4: raw single-word candidates whose base form
    // equals the initialism. Distinct raw candidates colliding on the same
    // initialism make the pairing ambiguous.
    std::optional<std::string> unique_abbreviation(const std::string& phrase) const {
        std::string target = norm_detail::lowercase(norm_detail::initialism(phrase));
        if (target.empty()) return std::nullopt;
        std::vector<std::string> matches;
        for (const auto& [raw, base] : base_forms_) {
            if (raw.find_first_of(" \t") != std::string::npos) continue;
            if (norm_detail::lowercase(base) == target) matches.push_back(base);
        }
        if (matches.size() != 1) return std::nullopt;
        return unify_casing(matches[0]);
    }

    // Full-name side of rule 4: multiword candidates whose initialism equals
    // the given word. Distinct base forms must be unique.
    std::optional<std::string> unique_full_name(const std::string& word) const {
        std::string target = norm_detail::lowercase(word);
        std::set<std::string> matches;
        for (const auto& [raw, base] : base_forms_) {
            if (norm_detail::part_count(base) < 2) continue;
            if (norm_detail::lowercase(norm_detail::initialism(base)) == target)
                matches.insert(base);
        }
        if (matches.size() != 1) return std::nullopt;
        return *matches.begin();
    }

private:
    // One trailing 's' is stripped when the stripped phrase exists in the
    // corpus, or when the word has >= 3 characters and does not end in "ss"
    // ("SS" must not become "S").
    std::string singularise(const std::string& word, const std::string& phrase) const {
        if (word.empty() || word.back() != 's') return word;
        std::string stripped_word = word.substr(0, word.size() - 1);
        std::string stripped_phrase = phrase.substr(0, phrase.size() - 1);
        if (lower_raws_.count(norm_detail::lowercase(stripped_phrase)))
            return stripped_word;
        std::string lw = norm_detail::lowercase(word);
        if (word.size() >= 3 && !(lw.size() >= 2 && lw.compare(lw.size() - 2, 2, "ss") == 0))
            return stripped_word;
        return word;
    }

    SurfaceCounts counts_;
    NormalizeOptions options_;
    std::map<std::string, std::string> base_forms_;  // raw -> rule-1 form
    std::set<std::string> lower_raws_;
    std::map<std::string, std::map<std::string, int>> casing_groups_;
};

// ---------------------------------------------------------------------------
// Abbreviation pairing
// ---------------------------------------------------------------------------

// Builds the initialism of a multiword phrase and looks for the unique
// candidate equal to it (case-insensitive). Zero or multiple matches yield
// no pairing.
inline std::optional<AbbrPairing> resolve_abbreviation(const std::string& phrase,
                                                       const SurfaceCounts& candidates,
                                                       NormalizeOptions options = {}) {
    if (norm_detail::part_count(phrase) < 2) return std::nullopt;
    NormContext ctx(candidates, std::move(options));
    auto abbr = ctx.unique_abbreviation(phrase);
    if (!abbr) return std::nullopt;
    return AbbrPairing{*abbr, phrase};
}

inline std::optional<AbbrPairing> resolve_abbreviation(const std::string& phrase,
                                                       const std::set<std::string>& candidates,
                                                       NormalizeOptions options = {}) {
    SurfaceCounts counts;
    for (const auto& c : candidates) counts[c] = 1;
    return resolve_abbreviation(phrase, counts, std::move(options));
}

namespace norm_detail {

// Canonical "ABBR (Full Name)" outputs normalise to themselves.
inline bool is_abbreviation_pair(const std::string& surface) {
    if (surface.size() < 5 || surface.back() != ')') return false;
    std::size_t open = surface.find(" (");
    if (open == std::string::npos || open == 0) return false;
    std::string abbr = surface.substr(0, open);
    if (abbr.find(' ') != std::string::npos) return false;
    std::string full = surface.substr(open + 2, surface.size() - open - 3);
    if (full.empty()) return false;
    return lowercase(initialism(full)) == lowercase(abbr);
}

// Shared rule-4 step: pair a phrase with its abbreviation, or a word with its
// full name.
inline std::string pair_abbreviation(const std::string& current, const NormContext& ctx) {
    if (part_count(current) >= 2) {
        if (auto abbr = ctx.unique_abbreviation(current))
            return AbbrPairing{*abbr, current}.combined();
    } else if (auto full = ctx.unique_full_name(current)) {
        if (auto abbr = ctx.unique_abbreviation(*full))
            return AbbrPairing{*abbr, *full}.combined();
    }
    return current;
}

}  // namespace norm_detail

// ---------------------------------------------------------------------------
// Per-kind normalisation
// ---------------------------------------------------------------------------

inline std::string normalize_method(const std::string& surface, const NormContext& ctx) {
    if (surface.empty()) throw InvalidInput("empty method surface");
    if (norm_detail::is_abbreviation_pair(surface)) return surface;
    std::string current = ctx.unify_casing(ctx.rule1(surface));
    if (norm_detail::part_count(current) >= 2) {
        current = norm_detail::filter_parts(
            current, [](const std::string& p) { return !norm_detail::all_lower_word(p); });
        current = ctx.unify_casing(current);
    }
    return norm_detail::pair_abbreviation(current, ctx);
}

inline std::string normalize_dataset(const std::string& surface, const NormContext& ctx) {
    if (surface.empty()) throw InvalidInput("empty dataset surface");
    if (norm_detail::is_abbreviation_pair(surface)) return surface;
    std::string current = ctx.unify_casing(ctx.rule1(surface));
    bool has_capitalized = false, has_other = false;
    for (const auto& unit : norm_detail::split_units(current))
        for (const auto& p : unit.parts)
            (norm_detail::capitalized_word(p) ? has_capitalized : has_other) = true;
    if (has_capitalized && has_other)
        current = norm_detail::filter_parts(current, norm_detail::capitalized_word);
    return norm_detail::pair_abbreviation(current, ctx);
}

inline std::string normalize_metric(const std::string& surface, const NormContext& ctx) {
    if (surface.empty()) throw InvalidInput("empty metric surface");
    if (norm_detail::is_abbreviation_pair(surface)) return surface;
    std::string current = ctx.unify_casing(ctx.rule1(surface));
    std::string lower = norm_detail::lowercase(current);
    // Digit stripping erases the 1 of "F1" before the containment test, so
    // family checks also look at the original surface.
    std::string lower_orig = norm_detail::lowercase(surface);

    // Family collapse, longest family first so "error rate" wins over any
    // shorter containment.
    static const char* kFamilies[] = {"error rate", "precision", "accuracy",
                                      "recall", "speed"};
    for (const char* family : kFamilies)
        if (lower.find(family) != std::string::npos ||
            lower_orig.find(family) != std::string::npos)
            return family;
    static const char* kFNames[] = {"f-score", "f-measure", "macrof", "microf", "f1"};
    for (const char* fname : kFNames)
        if (lower.find(fname) != std::string::npos ||
            lower_orig.find(fname) != std::string::npos)
            return "F-measure";

    // Keep uppercase-composed words unless the phrase ends in rate, ratio or
    // error ("RMS error" stays whole).
    std::vector<std::string> parts;
    for (const auto& unit : norm_detail::split_units(current))
        for (const auto& p : unit.parts) parts.push_back(p);
    bool has_upper_word =
        std::any_of(parts.begin(), parts.end(), norm_detail::all_upper_word);
    if (has_upper_word && !parts.empty()) {
        std::string last = norm_detail::lowercase(parts.back());
        if (last != "rate" && last != "ratio" && last != "error")
            current = norm_detail::filter_parts(current, norm_detail::all_upper_word);
    }
    return norm_detail::pair_abbreviation(current, ctx);
}

// Convenience overloads matching the operation contracts.
inline std::string normalize_method(const std::string& surface,
                                    const SurfaceCounts& corpus_methods,
                                    NormalizeOptions options = {}) {
    return normalize_method(surface, NormContext(corpus_methods, std::move(options)));
}
inline std::string normalize_dataset(const std::string& surface,
                                     const SurfaceCounts& corpus_datasets,
                                     NormalizeOptions options = {}) {
    return normalize_dataset(surface, NormContext(corpus_datasets, std::move(options)));
}
inline std::string normalize_metric(const std::string& surface,
                                    const SurfaceCounts& corpus_metrics,
                                    NormalizeOptions options = {}) {
    return normalize_metric(surface, NormContext(corpus_metrics, std::move(options)));
}

inline std::string normalize_surface(MarkerKind kind, const std::string& surface,
                                     const NormContext& ctx) {
    switch (kind) {
        case MarkerKind::Method: return normalize_method(surface, ctx);
        case MarkerKind::Dataset: return normalize_dataset(surface, ctx);
        case MarkerKind::Metric: return normalize_metric(surface, ctx);
    }
    return surface;
}

// ---------------------------------------------------------------------------
// Corpus-wide canonicalisation
// ---------------------------------------------------------------------------

// Groups mentions per kind by normalised form. Kinds partition first, so the
// same surface can be a method and a dataset without merging.
inline std::vector<CanonicalMarker> canonicalize_corpus(
    const std::vector<MarkerMention>& mentions, NormalizeOptions options = {}) {
    std::array<SurfaceCounts, kNumMarkerKinds> counts;
    for (const auto& m : mentions)
        ++counts[static_cast<std::size_t>(m.kind)][m.surface];

    std::vector<CanonicalMarker> out;
    for (int k = 0; k < kNumMarkerKinds; ++k) {
        if (counts[k].empty()) continue;
        NormContext ctx(counts[k], options);
        std::map<std::string, std::string> canonical_of;  // raw -> canonical
        std::map<std::string, CanonicalMarker> grouped;
        for (const auto& [raw, count] : counts[k]) {
            std::string canonical =
                normalize_surface(static_cast<MarkerKind>(k), raw, ctx);
            canonical_of[raw] = canonical;
            CanonicalMarker& cm = grouped[canonical];
            cm.kind = static_cast<MarkerKind>(k);
            cm.canonical = canonical;
            cm.aliases.insert(raw);
        }
        for (std::size_t i = 0; i < mentions.size(); ++i) {
            if (static_cast<int>(mentions[i].kind) != k) continue;
            grouped[canonical_of[mentions[i].surface]].mention_refs.push_back(i);
        }
        for (auto& [canonical, cm] : grouped) out.push_back(std::move(cm));
    }
    return out;
}

// Alias table export: (kind, canonical, alias) rows, sorted.
inline void write_alias_table(const std::vector<CanonicalMarker>& markers,
                              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write alias table " + path.string());
    std::vector<std::tuple<std::string, std::string, std::string>> rows;
    for (const auto& m : markers)
        for (const auto& alias : m.aliases)
            rows.emplace_back(to_string(m.kind), m.canonical, alias);
    std::sort(rows.begin(), rows.end());
    for (const auto& [kind, canonical, alias] : rows)
        out << kind << '\t' << canonical << '\t' << alias << '\n';
}

}  // namespace litmine
