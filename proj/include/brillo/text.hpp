#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace brillo {

// Canonical key=value text used for message payloads and scenario lines.
// Values are quoted only when they contain whitespace, quotes, '=' or are
// empty; quoting rules are fixed so the encoding is byte-stable.

std::string kv_escape(std::string_view value);

// Appends " key=value" (no leading space when out is empty).
void kv_append(std::string& out, std::string_view key, std::string_view value);

// Fixed-format double used anywhere a real number is serialized: shortest
// of up to four fractional digits, no exponent. "0.5" -> 0.5, "1" -> 1.
std::string format_number(double v);

// Parses "k1=v1 k2=v2 ..." honouring quotes. Throws DataError on bad syntax.
std::vector<std::pair<std::string, std::string>> parse_kv(std::string_view text);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Whitespace tokenization honouring double quotes; quotes are stripped.
std::vector<std::string> tokenize_quoted(std::string_view s);

}  // namespace brillo
