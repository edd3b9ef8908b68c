#include "powerq/error.hpp"

namespace powerq {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::horizon: return "horizon";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::unknown_identifier: return "unknown_identifier";
    case ErrorKind::unbound_variable: return "unbound_variable";
    case ErrorKind::eval_domain: return "eval_domain";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::witness_not_located: return "witness_not_located";
    case ErrorKind::non_convergence: return "non_convergence";
    }
    return "unknown";
}

void throw_domain(const std::string& message, std::optional<double> location)
{
    throw Error(ErrorKind::domain, message, location);
}

} // namespace powerq
