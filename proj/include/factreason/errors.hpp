#pragma once

#include <stdexcept>
#include <string>

namespace factreason {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when exact enumeration is asked to sweep more variables than the guard allows.
class TooManyVariablesError : public Error {
public:
    using Error::Error;
};

/// Z = 0: the model has no assignment with positive mass. Models built by this
/// library always have strictly positive priors, so this signals a construction bug
/// or contradictory hard factors in an externally supplied model.
class ZeroPartitionError : public Error {
public:
    using Error::Error;
};

/// Induced width along the elimination order exceeds the exact-inference guard.
class WidthExceededError : public Error {
public:
    using Error::Error;
};

class UaiParseError : public Error {
public:
    UaiParseError(int line, int column, const std::string& what)
        : Error("uai parse error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// HTTP / connection failure after the configured retries.
class TransportError : public Error {
public:
    using Error::Error;
};

/// Provider rejected the request for quota reasons (e.g. HTTP 429). Distinct from
/// TransportError so a harness can pause instead of failing the entry.
class QuotaError : public TransportError {
public:
    using TransportError::TransportError;
};

/// An LLM reply did not match the grammar the assessor expects.
class ReplyParseError : public Error {
public:
    using Error::Error;
};

class DatasetError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Stage failure inside the assessment pipeline, annotated with the stage name
/// and the atom/context the stage was working on.
class PipelineError : public Error {
public:
    PipelineError(const std::string& stage, const std::string& subject, const std::string& what)
        : Error("pipeline stage '" + stage + "' failed" +
                (subject.empty() ? std::string() : " on " + subject) + ": " + what),
          stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace factreason
