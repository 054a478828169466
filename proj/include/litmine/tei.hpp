#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "litmine/corpus.hpp"
#include "litmine/error.hpp"

namespace litmine {

// ---------------------------------------------------------------------------
// Minimal XML parser
//
// Covers the TEI subset GROBID emits: elements, attributes, character data,
// entities, comments, CDATA, processing instructions and a DOCTYPE prolog.
// Namespace prefixes are stripped; local names are what the importer matches.
// ---------------------------------------------------------------------------

struct XmlNode {
    std::string name;                                  // empty for text nodes
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlNode> children;
    std::string text;                                  // text nodes only

    bool is_text() const { return name.empty(); }

    const std::string* attr(const std::string& key) const {
        for (const auto& [k, v] : attrs)
            if (k == key) return &v;
        return nullptr;
    }
};

namespace detail {

class XmlParser {
public:
    explicit XmlParser(const std::string& input) : in_(input) {}

    XmlNode parse_document() {
        skip_misc();
        if (pos_ >= in_.size() || in_[pos_] != '<')
            fail("expected root element");
        XmlNode root = parse_element();
        skip_misc();
        if (pos_ < in_.size()) fail("trailing content after root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("malformed markup: " + msg, pos_);
    }

    bool starts_with(const char* s) const {
        return in_.compare(pos_, std::char_traits<char>::length(s), s) == 0;
    }

    void skip_ws() {
        while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_])))
            ++pos_;
    }

    // Whitespace, comments, PIs and DOCTYPE between markup.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<!--")) {
                std::size_t end = in_.find("-->", pos_ + 4);
                if (end == std::string::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else if (starts_with("<?")) {
                std::size_t end = in_.find("?>", pos_ + 2);
                if (end == std::string::npos) fail("unterminated processing instruction");
                pos_ = end + 2;
            } else if (starts_with("<!DOCTYPE")) {
                std::size_t end = in_.find('>', pos_);
                if (end == std::string::npos) fail("unterminated DOCTYPE");
                pos_ = end + 1;
            } else {
                return;
            }
        }
    }

    static bool name_start(unsigned char c) {
        return std::isalpha(c) || c == '_' || c == ':';
    }
    static bool name_char(unsigned char c) {
        return std::isalnum(c) || c == '_' || c == ':' || c == '-' || c == '.';
    }

    std::string parse_name() {
        if (pos_ >= in_.size() || !name_start(static_cast<unsigned char>(in_[pos_])))
            fail("expected name");
        std::size_t start = pos_;
        while (pos_ < in_.size() && name_char(static_cast<unsigned char>(in_[pos_])))
            ++pos_;
        return in_.substr(start, pos_ - start);
    }

    static std::string local_name(const std::string& qname) {
        std::size_t colon = qname.rfind(':');
        return colon == std::string::npos ? qname : qname.substr(colon + 1);
    }

    std::string decode_entities(const std::string& raw) const {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size();) {
            if (raw[i] != '&') {
                out.push_back(raw[i++]);
                continue;
            }
            std::size_t semi = raw.find(';', i);
            if (semi == std::string::npos || semi - i > 10) {
                out.push_back(raw[i++]);
                continue;
            }
            std::string ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "amp") out.push_back('&');
            else if (ent == "lt") out.push_back('<');
            else if (ent == "gt") out.push_back('>');
            else if (ent == "quot") out.push_back('"');
            else if (ent == "apos") out.push_back('\'');
            else if (!ent.empty() && ent[0] == '#') {
                long code = 0;
                try {
                    code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                               ? std::stol(ent.substr(2), nullptr, 16)
                               : std::stol(ent.substr(1));
                } catch (...) { code = -1; }
                if (code >= 0 && code < 128) out.push_back(static_cast<char>(code));
                else out.push_back('?');  // non-ASCII references degrade, not fail
            } else {
                out.push_back(raw[i++]);
                continue;
            }
            i = semi + 1;
        }
        return out;
    }

    std::string parse_attr_value() {
        if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\''))
            fail("expected quoted attribute value");
        char quote = in_[pos_++];
        std::size_t start = pos_;
        while (pos_ < in_.size() && in_[pos_] != quote) ++pos_;
        if (pos_ >= in_.size()) fail("unterminated attribute value");
        std::string value = decode_entities(in_.substr(start, pos_ - start));
        ++pos_;
        return value;
    }

    XmlNode parse_element() {
        ++pos_;  // '<'
        XmlNode node;
        std::string qname = parse_name();
        node.name = local_name(qname);
        for (;;) {
            skip_ws();
            if (pos_ >= in_.size()) fail("unterminated tag <" + qname);
            if (in_[pos_] == '/') {
                if (pos_ + 1 >= in_.size() || in_[pos_ + 1] != '>') fail("expected '/>'");
                pos_ += 2;
                return node;
            }
            if (in_[pos_] == '>') {
                ++pos_;
                break;
            }
            std::string attr_name = local_name(parse_name());
            skip_ws();
            if (pos_ >= in_.size() || in_[pos_] != '=') fail("expected '='");
            ++pos_;
            skip_ws();
            node.attrs.emplace_back(attr_name, parse_attr_value());
        }
        // Content until the matching close tag.
        for (;;) {
            if (pos_ >= in_.size()) fail("missing close tag </" + qname + ">");
            if (in_[pos_] == '<') {
                if (starts_with("</")) {
                    pos_ += 2;
                    std::string close = parse_name();
                    skip_ws();
                    if (pos_ >= in_.size() || in_[pos_] != '>') fail("expected '>'");
                    if (close != qname)
                        fail("mismatched close tag </" + close + "> for <" + qname + ">");
                    ++pos_;
                    return node;
                }
                if (starts_with("<!--")) {
                    std::size_t end = in_.find("-->", pos_ + 4);
                    if (end == std::string::npos) fail("unterminated comment");
                    pos_ = end + 3;
                    continue;
                }
                if (starts_with("<![CDATA[")) {
                    std::size_t end = in_.find("]]>", pos_ + 9);
                    if (end == std::string::npos) fail("unterminated CDATA section");
                    XmlNode text;
                    text.text = in_.substr(pos_ + 9, end - pos_ - 9);
                    node.children.push_back(std::move(text));
                    pos_ = end + 3;
                    continue;
                }
                if (starts_with("<?")) {
                    std::size_t end = in_.find("?>", pos_ + 2);
                    if (end == std::string::npos) fail("unterminated processing instruction");
                    pos_ = end + 2;
                    continue;
                }
                node.children.push_back(parse_element());
            } else {
                std::size_t start = pos_;
                while (pos_ < in_.size() && in_[pos_] != '<') ++pos_;
                XmlNode text;
                text.text = decode_entities(in_.substr(start, pos_ - start));
                node.children.push_back(std::move(text));
            }
        }
    }

    const std::string& in_;
    std::size_t pos_ = 0;
};

inline std::string collapse_ws(const std::string& s) {
    std::string out;
    bool pending = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            pending = !out.empty();
        } else {
            if (pending) out.push_back(' ');
            pending = false;
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

inline const XmlNode* find_child(const XmlNode& node, const std::string& name) {
    for (const auto& c : node.children)
        if (c.name == name) return &c;
    return nullptr;
}

inline const XmlNode* find_descendant(const XmlNode& node, const std::string& name) {
    for (const auto& c : node.children) {
        if (c.name == name) return &c;
        if (!c.is_text())
            if (const XmlNode* hit = find_descendant(c, name)) return hit;
    }
    return nullptr;
}

template <typename Fn>
inline void for_each_descendant(const XmlNode& node, const std::string& name, Fn&& fn) {
    for (const auto& c : node.children) {
        if (c.is_text()) continue;
        if (c.name == name) fn(c);
        for_each_descendant(c, name, fn);
    }
}

// All character data under a node, depth-first.
inline void gather_text(const XmlNode& node, std::string& out) {
    for (const auto& c : node.children) {
        if (c.is_text()) out += c.text;
        else gather_text(c, out);
    }
}

inline std::string text_of(const XmlNode& node) {
    std::string out;
    gather_text(node, out);
    return collapse_ws(out);
}

// Integer part of GROBID-style ids ("b12" -> 12).
inline std::optional<int> bibl_index(const std::string& id) {
    std::size_t i = 0;
    while (i < id.size() && !std::isdigit(static_cast<unsigned char>(id[i]))) ++i;
    if (i == id.size()) return std::nullopt;
    try {
        return std::stoi(id.substr(i));
    } catch (...) {
        return std::nullopt;
    }
}

inline std::optional<int> year_of_date(const XmlNode& date) {
    auto from = [](const std::string& s) -> std::optional<int> {
        for (std::size_t i = 0; i + 4 <= s.size(); ++i) {
            bool four = true;
            for (std::size_t k = 0; k < 4; ++k)
                if (!std::isdigit(static_cast<unsigned char>(s[i + k]))) { four = false; break; }
            if (four && (i + 4 == s.size() ||
                         !std::isdigit(static_cast<unsigned char>(s[i + 4]))))
                return std::stoi(s.substr(i, 4));
        }
        return std::nullopt;
    };
    if (const std::string* when = date.attr("when"))
        if (auto y = from(*when)) return y;
    return from(text_of(date));
}

// Paragraph text with bibliographic pointers rewritten to "[N]" markers, so
// that tokenisation turns them into citation anchors. Unknown elements are
// skipped with their text retained.
inline void paragraph_text(const XmlNode& node, std::string& out) {
    for (const auto& c : node.children) {
        if (c.is_text()) {
            out += c.text;
            continue;
        }
        if (c.name == "ref") {
            const std::string* target = c.attr("target");
            std::optional<int> idx;
            if (target && !target->empty() && (*target)[0] == '#')
                idx = bibl_index(target->substr(1));
            const std::string* type = c.attr("type");
            if (idx && (!type || *type == "bibr")) {
                out += "[" + std::to_string(*idx) + "]";
                continue;
            }
        }
        paragraph_text(c, out);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// TEI-subset importer
// ---------------------------------------------------------------------------

// Parses a GROBID-style TEI document: header (title, date, countries, venue),
// body divisions with headings and paragraphs, and the bibliography listing.
// The returned record has derived sentences; in-text pointers are citation
// anchors bound to the bibliography's ref ids.
inline PaperRecord parse_tei(const std::string& document,
                             const std::string& fallback_id = "") {
    detail::XmlParser parser(document);
    XmlNode root = parser.parse_document();

    PaperRecord rec;
    const XmlNode* header = detail::find_descendant(root, "teiHeader");

    // Title: prefer the titleStmt title.
    const XmlNode* title_node = nullptr;
    if (header) {
        if (const XmlNode* stmt = detail::find_descendant(*header, "titleStmt"))
            title_node = detail::find_descendant(*stmt, "title");
        if (!title_node) title_node = detail::find_descendant(*header, "title");
    }
    if (title_node) rec.title = detail::text_of(*title_node);
    if (rec.title.empty()) throw MissingMetadata("title");

    // Publication year.
    std::optional<int> year;
    if (header) {
        if (const XmlNode* pub = detail::find_descendant(*header, "publicationStmt"))
            if (const XmlNode* date = detail::find_descendant(*pub, "date"))
                year = detail::year_of_date(*date);
        if (!year)
            if (const XmlNode* date = detail::find_descendant(*header, "date"))
                year = detail::year_of_date(*date);
    }
    if (!year) throw MissingMetadata("year");
    rec.year = *year;

    if (header) {
        detail::for_each_descendant(*header, "country", [&](const XmlNode& c) {
            std::string name = detail::text_of(c);
            if (!name.empty() &&
                std::find(rec.countries.begin(), rec.countries.end(), name) ==
                    rec.countries.end())
                rec.countries.push_back(name);
        });
        // Venue: the monograph title of the source description, when present.
        if (const XmlNode* monogr = detail::find_descendant(*header, "monogr"))
            if (const XmlNode* vt = detail::find_descendant(*monogr, "title"))
                rec.venue = detail::text_of(*vt);
        if (const XmlNode* idno = detail::find_descendant(*header, "idno"))
            rec.paper_id = detail::text_of(*idno);
    }
    if (rec.paper_id.empty())
        rec.paper_id = fallback_id.empty() ? Corpus::normalized_title(rec.title)
                                           : fallback_id;

    // Body divisions.
    if (const XmlNode* body = detail::find_descendant(root, "body")) {
        detail::for_each_descendant(*body, "div", [&](const XmlNode& div) {
            std::optional<std::string> heading;
            if (const XmlNode* head = detail::find_child(div, "head")) {
                std::string h = detail::text_of(*head);
                if (const std::string* n = head->attr("n"); n && !n->empty())
                    h = *n + " " + h;
                if (!h.empty()) heading = h;
            }
            for (const auto& child : div.children) {
                if (child.name != "p") continue;
                Paragraph para;
                para.heading = heading;
                std::string raw;
                detail::paragraph_text(child, raw);
                para.text = detail::collapse_ws(raw);
                if (!para.text.empty()) rec.paragraphs.push_back(std::move(para));
            }
        });
    }

    // Bibliography listing.
    if (const XmlNode* list = detail::find_descendant(root, "listBibl")) {
        int fallback_index = 0;
        std::set<int> seen_ids;
        detail::for_each_descendant(*list, "biblStruct", [&](const XmlNode& bibl) {
            RefEntry ref;
            const std::string* id = bibl.attr("id");
            auto idx = id ? detail::bibl_index(*id) : std::nullopt;
            ref.ref_id = idx ? *idx : fallback_index;
            while (!seen_ids.insert(ref.ref_id).second) ++ref.ref_id;
            fallback_index = ref.ref_id + 1;
            if (const XmlNode* t = detail::find_descendant(bibl, "title"))
                ref.title = detail::text_of(*t);
            if (const XmlNode* date = detail::find_descendant(bibl, "date"))
                ref.year = detail::year_of_date(*date);
            rec.references.push_back(std::move(ref));
        });
    }

    derive_sentences(rec);
    return rec;
}

// ---------------------------------------------------------------------------
// Corpus loading
// ---------------------------------------------------------------------------

// Loads a directory of documents or a single line-delimited canonical file.
// Directories may mix canonical .jsonl files and TEI .xml/.tei documents;
// paths are visited in sorted order so loading is deterministic.
inline Corpus load_corpus(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    Corpus corpus;

    auto load_file = [&corpus](const fs::path& file) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw IoError("cannot read " + file.string());
        std::string ext = file.extension().string();
        if (ext == ".xml" || ext == ".tei") {
            std::ostringstream buf;
            buf << in.rdbuf();
            corpus.add(parse_tei(buf.str(), file.stem().string()));
        } else {
            read_corpus_jsonl_into(corpus, in, file.string());
        }
    };

    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            if (ext == ".jsonl" || ext == ".ndjson" || ext == ".xml" || ext == ".tei")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) load_file(f);
    } else if (fs::is_regular_file(path, ec)) {
        load_file(path);
    } else {
        throw IoError("no such corpus path: " + path.string());
    }

    corpus.resolve_references();
    for (auto& rec : corpus.records()) derive_sentences(rec);
    return corpus;
}

}  // namespace litmine
