#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace powerq {

enum class ErrorKind {
    domain,
    horizon,
    overflow,
    syntax,
    unknown_identifier,
    unbound_variable,
    eval_domain,
    numeric,
    witness_not_located,
    non_convergence,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. `location` carries the
/// abscissa t at which a numeric fault occurred, when there is one.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<double> location = std::nullopt)
        : std::runtime_error(message), kind_(kind), location_(location) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::optional<double>& location() const noexcept { return location_; }

private:
    ErrorKind kind_;
    std::optional<double> location_;
};

/// Parse failure; also raised with kind unknown_identifier for bad names.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t offset, std::vector<std::string> expected,
                ErrorKind kind = ErrorKind::syntax)
        : Error(kind, message), offset_(offset), expected_(std::move(expected)) {}

    /// Byte offset into the source text.
    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

[[noreturn]] void throw_domain(const std::string& message, std::optional<double> location = std::nullopt);

} // namespace powerq
