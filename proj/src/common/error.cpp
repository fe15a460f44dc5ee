#include "tactile/error.hpp"

namespace tactile {

namespace {

std::string format_parse_message(const std::string& source, std::size_t line,
                                 const std::string& message) {
    if (line == 0) {
        return source + ": " + message;
    }
    return source + ":" + std::to_string(line) + ": " + message;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : Error("parse_error", format_parse_message(source, line, message)), line_(line) {}

}  // namespace tactile
