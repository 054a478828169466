#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace litmine {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed markup while parsing a document. Carries the byte offset of the
// first offending character.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : Error(what + " (byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

// A required metadata field (title, year) is missing from a document.
class MissingMetadata : public Error {
public:
    explicit MissingMetadata(const std::string& field)
        : Error("missing metadata field: " + field), field_(field) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Two records in one corpus share a paper id.
class DuplicateId : public Error {
public:
    explicit DuplicateId(const std::string& id)
        : Error("duplicate paper id: " + id), id_(id) {}

    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

// Training data lacks coverage for a label.
class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& label)
        : Error("no training examples for label: " + label), label_(label) {}

    const std::string& label() const { return label_; }

private:
    std::string label_;
};

// A gold tag sequence violates the BIO transition constraints.
class InvalidGold : public Error {
public:
    explicit InvalidGold(std::size_t sentence_index)
        : Error("illegal gold tag sequence at sentence " +
                std::to_string(sentence_index)),
          sentence_index_(sentence_index) {}

    std::size_t sentence_index() const { return sentence_index_; }

private:
    std::size_t sentence_index_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

class EmptyInput : public Error {
public:
    explicit EmptyInput(const std::string& what) : Error(what) {}
};

// A paper has no research scenes, so no distribution can be formed.
class NoScenes : public Error {
public:
    explicit NoScenes(const std::string& paper_id)
        : Error("paper has no research scenes: " + paper_id) {}
};

// No effective methods were proposed in the queried year.
class NoMethodsInYear : public Error {
public:
    explicit NoMethodsInYear(int year)
        : Error("no effective methods proposed in year " + std::to_string(year)),
          year_(year) {}

    int year() const { return year_; }

private:
    int year_;
};

}  // namespace litmine
