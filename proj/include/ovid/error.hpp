#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ovid {

/// Base of every error raised by the pipeline.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problems with input data. The CLI maps these to exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

/// Incompatible files, schemas or configurations. Exit code 3.
class CompatibilityError : public Error {
public:
    using Error::Error;
};

class MalformedXml : public DataError {
public:
    MalformedXml(const std::string& message, std::size_t line, std::size_t column)
        : DataError("malformed XML at line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + message),
          m_line(line),
          m_column(column) {}

    std::size_t line() const noexcept { return m_line; }
    std::size_t column() const noexcept { return m_column; }

private:
    std::size_t m_line;
    std::size_t m_column;
};

class DuplicateChangesetId : public DataError {
public:
    using DataError::DataError;
};

class InconsistentHistory : public DataError {
public:
    using DataError::DataError;
};

class NoVandalismFound : public DataError {
public:
    using DataError::DataError;
};

class InsufficientNegatives : public DataError {
public:
    using DataError::DataError;
};

class EmptyTrainSet : public DataError {
public:
    using DataError::DataError;
};

class DivergedLoss : public DataError {
public:
    using DataError::DataError;
};

class IdSetMismatch : public DataError {
public:
    using DataError::DataError;
};

// Programming errors in the numerical kernel.

class ShapeMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class EmptyKeySet : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class NoForwardRecorded : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class NonFiniteValue : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace ovid
