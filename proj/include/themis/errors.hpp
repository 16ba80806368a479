#pragma once

#include <stdexcept>
#include <string>

namespace themis {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A record, model output, or config value violates its declared schema.
class SchemaError : public Error {
public:
    SchemaError(std::string field, const std::string& reason)
        : Error("schema violation [" + field + "]: " + reason), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Dataset file problems (missing file, malformed line in strict mode).
class DatasetError : public Error {
public:
    DatasetError(const std::string& what, long line = -1)
        : Error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Classification of model-call failures so the retry layer can react.
enum class BackendFault { transport, http_status, response_schema, timeout };

class BackendError : public Error {
public:
    BackendError(BackendFault fault, const std::string& what, int status = 0)
        : Error(what), fault_(fault), status_(status) {}
    BackendFault fault() const { return fault_; }
    int http_status() const { return status_; }

private:
    BackendFault fault_;
    int status_;
};

}  // namespace themis
