#include "topofield/toml.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace topofield::toml {

namespace {

using nlohmann::json;

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    json document() {
        json root = json::object();
        json* table = &root;
        while (true) {
            skip_blank_lines();
            if (eof()) break;
            if (peek() == '[') {
                table = &header(root);
            } else {
                key_value(*table);
            }
            end_of_line();
        }
        return root;
    }

private:
    const std::string& s_;
    std::size_t p_ = 0;
    int line_ = 1;

    [[noreturn]] void error(const std::string& m) const { throw ParseError(line_, m); }
    bool eof() const { return p_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[p_]; }
    char get() {
        const char c = s_[p_++];
        if (c == '\n') ++line_;
        return c;
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++p_;
    }
    void skip_comment() {
        if (peek() == '#')
            while (!eof() && peek() != '\n') ++p_;
    }
    void skip_blank_lines() {
        while (true) {
            skip_ws();
            skip_comment();
            if (peek() == '\r') ++p_;
            if (peek() == '\n') {
                get();
                continue;
            }
            return;
        }
    }
    // Whitespace, comments and newlines inside arrays.
    void skip_ws_nl() {
        while (true) {
            skip_ws();
            skip_comment();
            if (peek() == '\r') ++p_;
            if (peek() == '\n') {
                get();
                continue;
            }
            return;
        }
    }
    void end_of_line() {
        skip_ws();
        skip_comment();
        if (peek() == '\r') ++p_;
        if (eof()) return;
        if (peek() != '\n') error("unexpected text after value");
        get();
    }

    std::string bare_or_quoted_key() {
        skip_ws();
        if (peek() == '"') return basic_string();
        if (peek() == '\'') return literal_string();
        std::string k;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
            k += get();
        if (k.empty()) error("expected a key");
        return k;
    }

    std::vector<std::string> dotted_key() {
        std::vector<std::string> parts{bare_or_quoted_key()};
        skip_ws();
        while (peek() == '.') {
            ++p_;
            parts.push_back(bare_or_quoted_key());
            skip_ws();
        }
        return parts;
    }

    json& descend(json& t, const std::vector<std::string>& parts, std::size_t n) {
        json* cur = &t;
        for (std::size_t k = 0; k < n; ++k) {
            auto& next = (*cur)[parts[k]];
            if (next.is_null()) next = json::object();
            if (!next.is_object()) error("key '" + parts[k] + "' is not a table");
            cur = &next;
        }
        return *cur;
    }

    json& header(json& root) {
        get();  // [
        if (peek() == '[') error("arrays of tables are not supported");
        const auto parts = dotted_key();
        skip_ws();
        if (peek() != ']') error("expected ']' after table name");
        get();
        json& t = descend(root, parts, parts.size());
        if (!t.empty()) error("table [" + parts.back() + "] defined twice");
        return t;
    }

    void key_value(json& table) {
        const auto parts = dotted_key();
        skip_ws();
        if (peek() != '=') error("expected '=' after key");
        get();
        skip_ws();
        json v = value();
        json& t = descend(table, parts, parts.size() - 1);
        if (t.contains(parts.back())) error("duplicate key '" + parts.back() + "'");
        t[parts.back()] = std::move(v);
    }

    json value() {
        const char c = peek();
        if (c == '"') {
            if (s_.compare(p_, 3, "\"\"\"") == 0) error("multi-line strings are not supported");
            return basic_string();
        }
        if (c == '\'') return literal_string();
        if (c == '[') return array();
        if (c == '{') return inline_table();
        if (s_.compare(p_, 4, "true") == 0) {
            p_ += 4;
            return true;
        }
        if (s_.compare(p_, 5, "false") == 0) {
            p_ += 5;
            return false;
        }
        return number();
    }

    std::string basic_string() {
        get();  // "
        std::string out;
        while (true) {
            if (eof() || peek() == '\n') error("unterminated string");
            char c = get();
            if (c == '"') return out;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (eof()) error("unterminated escape");
            c = get();
            switch (c) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                default: error(std::string("unsupported escape \\") + c);
            }
        }
    }

    std::string literal_string() {
        get();  // '
        std::string out;
        while (true) {
            if (eof() || peek() == '\n') error("unterminated string");
            const char c = get();
            if (c == '\'') return out;
            out += c;
        }
    }

    json array() {
        get();  // [
        json arr = json::array();
        while (true) {
            skip_ws_nl();
            if (peek() == ']') {
                get();
                return arr;
            }
            arr.push_back(value());
            skip_ws_nl();
            if (peek() == ',') {
                get();
                continue;
            }
            if (peek() == ']') {
                get();
                return arr;
            }
            error("expected ',' or ']' in array");
        }
    }

    json inline_table() {
        get();  // {
        json t = json::object();
        skip_ws();
        if (peek() == '}') {
            get();
            return t;
        }
        while (true) {
            key_value(t);
            skip_ws();
            if (peek() == ',') {
                get();
                continue;
            }
            if (peek() == '}') {
                get();
                return t;
            }
            error("expected ',' or '}' in inline table");
        }
    }

    json number() {
        std::string tok;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' || c == '_')
                tok += get();
            else
                break;
        }
        if (tok.empty()) error("expected a value");
        std::string clean;
        for (char c : tok)
            if (c != '_') clean += c;
        std::string body = clean;
        if (!body.empty() && (body[0] == '+' || body[0] == '-')) body = body.substr(1);
        const bool neg = !clean.empty() && clean[0] == '-';
        if (body == "inf") return neg ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
        const bool is_float = clean.find_first_of(".eE") != std::string::npos;
        std::size_t used = 0;
        try {
            if (!is_float) {
                const long long v = std::stoll(clean, &used, 10);
                if (used == clean.size()) return static_cast<std::int64_t>(v);
            } else {
                const double v = std::stod(clean, &used);
                if (used == clean.size()) return v;
            }
        } catch (const std::exception&) {
        }
        error("invalid value '" + tok + "'");
    }
};

std::string key(const std::string& k);

std::string scalar(const json& v) {
    if (v.is_string()) {
        std::string out = "\"";
        for (char c : v.get<std::string>()) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default: out += c;
            }
        }
        return out + "\"";
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isnan(d)) return "nan";
        if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
        std::ostringstream os;
        os << std::setprecision(17) << d;
        std::string s = os.str();
        if (s.find_first_of(".eE") == std::string::npos) s += ".0";
        return s;
    }
    if (v.is_array()) {
        std::string out = "[";
        for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + scalar(v[k]);
        return out + "]";
    }
    if (v.is_object()) {
        std::string out = "{";
        bool first = true;
        for (const auto& [k, x] : v.items()) {
            out += (first ? " " : ", ") + key(k) + " = " + scalar(x);
            first = false;
        }
        return out + (first ? "}" : " }");
    }
    return "\"\"";
}

std::string key(const std::string& k) {
    const bool bare = !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
    return bare ? k : scalar(json(k));
}

void dump_table(std::ostringstream& os, const json& t, const std::string& prefix) {
    for (const auto& [k, v] : t.items())
        if (!v.is_object()) os << key(k) << " = " << scalar(v) << "\n";
    for (const auto& [k, v] : t.items())
        if (v.is_object()) {
            const std::string name = prefix.empty() ? key(k) : prefix + "." + key(k);
            bool has_scalars = false;
            for (const auto& [k2, v2] : v.items())
                if (!v2.is_object()) has_scalars = true;
            if (has_scalars || v.empty()) os << "\n[" << name << "]\n";
            dump_table(os, v, name);
        }
}

}  // namespace

nlohmann::json parse(const std::string& text) { return Parser(text).document(); }

std::string dump(const nlohmann::json& doc) {
    std::ostringstream os;
    dump_table(os, doc, "");
    return os.str();
}

}  // namespace topofield::toml
