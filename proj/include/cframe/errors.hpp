#pragma once

#include <stdexcept>
#include <string>

namespace cframe {

// Base for every error the library raises. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input (polarity tokens, embedding rows, TSV/CSV files).
class FormatError : public Error {
public:
    using Error::Error;
};

// A token that must exist in a table or map does not.
class LookupError : public Error {
public:
    using Error::Error;
};

// Vector or matrix sizes disagree.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Factor-graph structure is unsuitable for the requested algorithm.
class StructureError : public Error {
public:
    using Error::Error;
};

// Input violates a precondition (empty data, missing aspect, bad config).
class InputError : public Error {
public:
    using Error::Error;
};

// Mathematically undefined result (zero-norm cosine, alpha without pairs).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace cframe
