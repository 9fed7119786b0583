#include "brillo/text.hpp"

#include <cctype>
#include <cstdio>

#include "brillo/error.hpp"

namespace brillo {

namespace {

bool needs_quotes(std::string_view v) {
    if (v.empty()) return true;
    for (char c : v) {
        if (c == ' ' || c == '\t' || c == '"' || c == '=' || c == '\\' || c == '\n') return true;
    }
    return false;
}

}  // namespace

std::string kv_escape(std::string_view value) {
    if (!needs_quotes(value)) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

void kv_append(std::string& out, std::string_view key, std::string_view value) {
    if (!out.empty()) out += ' ';
    out += key;
    out += '=';
    out += kv_escape(value);
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    std::string s(buf);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

std::vector<std::pair<std::string, std::string>> parse_kv(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && (text[i] == ' ' || text[i] == '\t')) ++i;
        if (i >= n) break;
        std::size_t key_start = i;
        while (i < n && text[i] != '=' && text[i] != ' ' && text[i] != '\t') ++i;
        if (i >= n || text[i] != '=') {
            throw DataError("expected '=' in key-value text near '" +
                            std::string(text.substr(key_start)) + "'");
        }
        std::string key(text.substr(key_start, i - key_start));
        ++i;
        std::string value;
        if (i < n && text[i] == '"') {
            ++i;
            bool closed = false;
            while (i < n) {
                char c = text[i];
                if (c == '\\' && i + 1 < n) {
                    char next = text[i + 1];
                    value += (next == 'n') ? '\n' : next;
                    i += 2;
                    continue;
                }
                if (c == '"') {
                    closed = true;
                    ++i;
                    break;
                }
                value += c;
                ++i;
            }
            if (!closed) throw DataError("unterminated quote in key-value text");
        } else {
            std::size_t value_start = i;
            while (i < n && text[i] != ' ' && text[i] != '\t') ++i;
            value = std::string(text.substr(value_start, i - value_start));
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::string> tokenize_quoted(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= n) break;
        std::string tok;
        while (i < n && !std::isspace(static_cast<unsigned char>(s[i]))) {
            if (s[i] == '"') {
                ++i;
                while (i < n && s[i] != '"') {
                    if (s[i] == '\\' && i + 1 < n) ++i;
                    tok += s[i];
                    ++i;
                }
                if (i >= n) throw DataError("unterminated quote");
                ++i;
            } else {
                tok += s[i];
                ++i;
            }
        }
        out.push_back(std::move(tok));
    }
    return out;
}

}  // namespace brillo
