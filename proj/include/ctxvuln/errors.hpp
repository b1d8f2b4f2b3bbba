#pragma once

#include <stdexcept>
#include <string>

namespace ctxvuln {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input document (bad JSON/CSV, wrong field shape). Carries a
// line/field locator in the message when one is known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Structurally well-formed input that violates a domain invariant
// (duplicate id, link to an unknown node, score out of range, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Caller passed an out-of-contract argument (odd fat-tree arity, empty
// graph to the ranker, threshold outside (0,1], ...).
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what) : Error(what) {}
};

}  // namespace ctxvuln
