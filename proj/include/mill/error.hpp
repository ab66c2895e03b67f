#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mill {

/// 1-based position in a source text. Columns count code points, not bytes.
struct SourcePos {
    int line = 0;
    int column = 0;

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// Base of every error raised by the library. Errors that come from parsing
/// carry the position of the offending input.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message, std::optional<SourcePos> where = std::nullopt)
        : std::runtime_error(format(message, where)), message_(message), where_(where) {}

    const std::string& message() const noexcept { return message_; }
    const std::optional<SourcePos>& where() const noexcept { return where_; }

private:
    static std::string format(const std::string& message, const std::optional<SourcePos>& where) {
        if (!where) return message;
        return "line " + std::to_string(where->line) + ", column " + std::to_string(where->column) + ": " +
               message;
    }

    std::string message_;
    std::optional<SourcePos> where_;
};

class ParseError : public Error {
    using Error::Error;
};

class ArityError : public Error {
    using Error::Error;
};

class InvalidTerm : public Error {
    using Error::Error;
};

class EmptySide : public Error {
    using Error::Error;
};

class InvalidId : public Error {
    using Error::Error;
};

class DuplicateId : public Error {
    using Error::Error;
};

class ConfigError : public Error {
    using Error::Error;
};

/// Raised when a query branch succeeds without binding all of its variables.
class UnboundResult : public Error {
    using Error::Error;
};

}  // namespace mill
