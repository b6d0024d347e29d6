#pragma once

#include <stdexcept>
#include <string>

namespace speclab {

// Base class for all errors raised by the library. Subclasses carry the
// condition name used in diagnostics and CLI exit-code mapping.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidClassParam : Error {
    explicit InvalidClassParam(const std::string& what) : Error("InvalidClassParam: " + what) {}
};

struct ResolutionTooSmall : Error {
    explicit ResolutionTooSmall(const std::string& what) : Error("ResolutionTooSmall: " + what) {}
};

struct EmptySelection : Error {
    explicit EmptySelection(const std::string& what) : Error("EmptySelection: " + what) {}
};

struct NonManifoldEdge : Error {
    explicit NonManifoldEdge(const std::string& what) : Error("NonManifoldEdge: " + what) {}
};

struct UnsupportedClass : Error {
    explicit UnsupportedClass(const std::string& what) : Error("UnsupportedClass: " + what) {}
};

struct NonpositiveLength : Error {
    explicit NonpositiveLength(const std::string& what) : Error("NonpositiveLength: " + what) {}
};

struct OutOfCollar : Error {
    explicit OutOfCollar(const std::string& what) : Error("OutOfCollar: " + what) {}
};

struct DegenerateTriangle : Error {
    explicit DegenerateTriangle(const std::string& what) : Error("DegenerateTriangle: " + what) {}
};

struct ConvergenceFailure : Error {
    explicit ConvergenceFailure(const std::string& what) : Error("ConvergenceFailure: " + what) {}
};

struct ClusterAmbiguity : Error {
    explicit ClusterAmbiguity(const std::string& what) : Error("ClusterAmbiguity: " + what) {}
};

struct IncompleteTable : Error {
    explicit IncompleteTable(const std::string& what) : Error("IncompleteTable: " + what) {}
};

struct BallsOverlap : Error {
    explicit BallsOverlap(const std::string& what) : Error("BallsOverlap: " + what) {}
};

struct WrongDirection : Error {
    explicit WrongDirection(const std::string& what) : Error("WrongDirection: " + what) {}
};

struct InconsistentSpec : Error {
    explicit InconsistentSpec(const std::string& what) : Error("InconsistentSpec: " + what) {}
};

struct NotApplicable : Error {
    explicit NotApplicable(const std::string& what) : Error("NotApplicable: " + what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("ConfigError: " + what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("IoError: " + what) {}
};

} // namespace speclab
