#pragma once

#include <stdexcept>
#include <string>

namespace shannon_markov {

// Base for every error raised by the library; `kind()` is the stable
// machine-readable name the CLI reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& m) : Error("ParseError", m) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& m) : Error("ValidationError", m) {}
};

class ZeroProbability : public Error {
public:
    explicit ZeroProbability(const std::string& m) : Error("ZeroProbability", m) {}
};

class ZeroPathProbability : public Error {
public:
    ZeroPathProbability(std::size_t step, const std::string& m)
        : Error("ZeroPathProbability", m), step_(step) {}
    /// Index into the sequence of the first symbol whose probability is zero.
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

class ReducibleChain : public Error {
public:
    explicit ReducibleChain(const std::string& m) : Error("ReducibleChain", m) {}
};

class ResourceLimit : public Error {
public:
    explicit ResourceLimit(const std::string& m) : Error("ResourceLimit", m) {}
};

class DefectiveMatrix : public Error {
public:
    explicit DefectiveMatrix(const std::string& m) : Error("DefectiveMatrix", m) {}
};

class UndefinedAlpha : public Error {
public:
    explicit UndefinedAlpha(const std::string& m) : Error("UndefinedAlpha", m) {}
};

class ZeroIndex : public Error {
public:
    explicit ZeroIndex(const std::string& m) : Error("ZeroIndex", m) {}
};

class ComplexResidual : public Error {
public:
    explicit ComplexResidual(const std::string& m) : Error("ComplexResidual", m) {}
};

}  // namespace shannon_markov
