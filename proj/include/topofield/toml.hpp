#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace topofield::toml {

/// Malformed document; `line` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Parses the TOML subset used by run configs into a JSON object: tables and
/// dotted table headers, bare, quoted and dotted keys, basic and literal
/// strings, integers (kept as integers), floats, booleans, arrays (possibly
/// multi-line) and inline tables. Arrays of tables, dates and multi-line
/// strings are rejected.
nlohmann::json parse(const std::string& text);

/// Renders a JSON object of tables and scalars back into that subset.
std::string dump(const nlohmann::json& doc);

}  // namespace topofield::toml
