#include "brillo/nlu.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

IntentDistribution IntentDistribution::uniform() {
    IntentDistribution d;
    d.probs.fill(1.0 / static_cast<double>(kIntentCount));
    return d;
}

Intent IntentDistribution::argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kIntentCount; ++i) {
        if (probs[i] > probs[best]) best = i;
    }
    return static_cast<Intent>(best);
}

bool IntentDistribution::valid() const {
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) return false;
        sum += p;
    }
    return std::abs(sum - 1.0) <= 1e-9;
}

IntentDistribution to_distribution(Intent classified, double confidence) {
    if (confidence < 0.0 || confidence > 1.0) throw Error("confidence outside [0,1]");
    IntentDistribution d;
    double rest = (1.0 - confidence) / static_cast<double>(kIntentCount - 1);
    d.probs.fill(rest);
    d.probs[static_cast<std::size_t>(classified)] = confidence;
    return d;
}

RuleTable RuleTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open rule file '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    try {
        return from_lines(lines);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

RuleTable RuleTable::from_lines(const std::vector<std::string>& lines) {
    RuleTable table;
    std::size_t line_no = 0;
    for (const auto& raw : lines) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto cols = split(line, '\t');
        if (cols.size() != 3) {
            throw DataError("line " + std::to_string(line_no) +
                            ": expected intent<TAB>pattern<TAB>confidence");
        }
        auto intent = intent_from_string(trim(cols[0]));
        if (!intent) {
            throw DataError("line " + std::to_string(line_no) + ": unknown intent '" + cols[0] +
                            "'");
        }
        NluRule rule;
        rule.intent = *intent;
        rule.pattern = std::string(trim(cols[1]));
        try {
            rule.confidence = std::stod(cols[2]);
        } catch (const std::exception&) {
            throw DataError("line " + std::to_string(line_no) + ": bad confidence '" + cols[2] +
                            "'");
        }
        if (rule.confidence <= 0.0 || rule.confidence > 1.0) {
            throw DataError("line " + std::to_string(line_no) + ": confidence outside (0,1]");
        }
        try {
            rule.regex = std::regex(rule.pattern, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw DataError("line " + std::to_string(line_no) + ": bad pattern: " + e.what());
        }
        table.rules_.push_back(std::move(rule));
    }
    return table;
}

std::optional<std::pair<Intent, double>> RuleTable::match(const std::string& text) const {
    if (trim(text).empty()) throw Error("cannot classify empty text");
    std::string lower = to_lower(text);
    std::size_t best_len = 0;
    const NluRule* best = nullptr;
    for (const auto& rule : rules_) {
        auto begin = std::sregex_iterator(lower.begin(), lower.end(), rule.regex);
        auto end = std::sregex_iterator();
        std::size_t longest = 0;
        for (auto it = begin; it != end; ++it) {
            longest = std::max(longest, static_cast<std::size_t>(it->length(0)));
        }
        if (longest > best_len) {
            best_len = longest;
            best = &rule;
        }
    }
    if (!best) return std::nullopt;
    return std::make_pair(best->intent, best->confidence);
}

IntentDistribution RuleTable::classify(const std::string& text) const {
    auto m = match(text);
    if (!m) return IntentDistribution::uniform();
    return to_distribution(m->first, m->second);
}

namespace {

// Start positions of `needle` as a whole-word substring of `hay` (both lowercase).
std::vector<std::size_t> word_matches(const std::string& hay, const std::string& needle) {
    std::vector<std::size_t> out;
    if (needle.empty()) return out;
    auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0;
    };
    std::size_t pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_word(hay[pos - 1]);
        std::size_t after = pos + needle.size();
        bool right_ok = after >= hay.size() || !is_word(hay[after]);
        if (left_ok && right_ok) out.push_back(pos);
        pos += 1;
    }
    return out;
}

const std::vector<std::string>& remove_markers() {
    static const std::vector<std::string> kMarkers = {"without", "no", "minus", "hold", "skip",
                                                      "remove"};
    return kMarkers;
}

const std::vector<std::string>& add_markers() {
    static const std::vector<std::string> kMarkers = {"with", "extra", "add", "plus", "double"};
    return kMarkers;
}

}  // namespace

OrderRequest extract_order_slots(const std::string& text, Intent intent,
                                 const CatalogView& catalog) {
    OrderRequest req;
    if (intent == Intent::DeleteOrder) {
        req.cancel = true;
        return req;
    }
    std::string lower = to_lower(text);

    // Product: longest catalog name appearing as a whole-word substring.
    std::size_t product_pos = std::string::npos;
    std::size_t product_len = 0;
    for (const auto& drink : catalog.drinks) {
        std::string needle = to_lower(drink);
        auto hits = word_matches(lower, needle);
        if (!hits.empty() && needle.size() > product_len) {
            req.product = drink;
            product_pos = hits.front();
            product_len = needle.size();
        }
    }

    // Modifications: ingredient mentions outside the product span, with an
    // add/remove marker among the three preceding words.
    auto words_before = [&](std::size_t pos) {
        std::vector<std::string> words;
        std::string before = lower.substr(0, pos);
        auto tokens = split(before, ' ');
        for (auto it = tokens.rbegin(); it != tokens.rend() && words.size() < 3; ++it) {
            std::string w;
            for (char c : *it) {
                if (std::isalnum(static_cast<unsigned char>(c))) w += c;
            }
            if (!w.empty()) words.push_back(w);
        }
        return words;
    };
    // Longer ingredient names claim their span first so that e.g. a liqueur
    // mention does not also register its base fruit.
    std::vector<std::string> ingredients = catalog.ingredients;
    std::sort(ingredients.begin(), ingredients.end(),
              [](const std::string& a, const std::string& b) {
                  return a.size() != b.size() ? a.size() > b.size() : a < b;
              });
    std::vector<std::pair<std::size_t, OrderModification>> positioned;
    std::vector<std::pair<std::size_t, std::size_t>> claimed;
    auto overlaps_claimed = [&](std::size_t pos, std::size_t len) {
        for (const auto& [cpos, clen] : claimed) {
            if (pos < cpos + clen && cpos < pos + len) return true;
        }
        return false;
    };
    for (const auto& ingredient : ingredients) {
        std::string needle = to_lower(ingredient);
        for (std::size_t pos : word_matches(lower, needle)) {
            bool inside_product = product_pos != std::string::npos && pos >= product_pos &&
                                  pos < product_pos + product_len;
            if (inside_product || overlaps_claimed(pos, needle.size())) continue;
            claimed.emplace_back(pos, needle.size());
            auto context = words_before(pos);
            bool is_remove = false;
            bool is_add = false;
            for (const auto& w : context) {
                if (!is_remove)
                    is_remove = std::find(remove_markers().begin(), remove_markers().end(), w) !=
                                remove_markers().end();
                if (!is_add)
                    is_add = std::find(add_markers().begin(), add_markers().end(), w) !=
                             add_markers().end();
            }
            // "without" style context wins over "with"; bare mentions are ignored.
            if (is_remove) {
                positioned.emplace_back(pos, OrderModification{ingredient, true});
            } else if (is_add) {
                positioned.emplace_back(pos, OrderModification{ingredient, false});
            }
            break;  // one mention per ingredient is enough
        }
    }
    std::sort(positioned.begin(), positioned.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [_, mod] : positioned) req.modifications.push_back(std::move(mod));
    return req;
}

std::optional<int> extract_rating(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '1' && c <= '5') {
            bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
            bool right_ok =
                i + 1 >= text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1]));
            if (left_ok && right_ok) return c - '0';
        }
    }
    const std::string lower = to_lower(text);
    static const std::pair<const char*, int> kWords[] = {
        {"one", 1}, {"two", 2}, {"three", 3}, {"four", 4}, {"five", 5}};
    for (const auto& [word, value] : kWords) {
        if (!word_matches(lower, word).empty()) return value;
    }
    return std::nullopt;
}

}  // namespace brillo
