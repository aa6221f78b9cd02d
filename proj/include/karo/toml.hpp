#pragma once

// Minimal TOML-subset reader used for robot spec, profile, and scenario
// files.  Supported: comments, [table] / [[array-of-table]] headers, bare
// keys, strings, booleans, numbers, and single-line arrays of numbers or
// strings.  That subset covers the documented file schemas; anything else
// is a parse error.

#include <cctype>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace karo::toml {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

class Value;

class Table {
public:
    using Entry = std::pair<std::string, std::shared_ptr<Value>>;

    bool contains(const std::string& key) const { return find(key) != nullptr; }
    const Value* find(const std::string& key) const;
    Value& insert(const std::string& key);
    Value& get_or_create_table(const std::string& key);

    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;  // insertion order preserved
};

class Value {
public:
    enum class Kind { Number, Boolean, String, NumberArray, StringArray, Table, TableArray };

    Kind kind = Kind::Table;
    double number = 0.0;
    bool boolean = false;
    std::string string;
    std::vector<double> number_array;
    std::vector<std::string> string_array;
    karo::toml::Table table;
    std::vector<karo::toml::Table> table_array;

    bool is_table() const { return kind == Kind::Table; }
};

inline const Value* Table::find(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v.get();
    return nullptr;
}

inline Value& Table::insert(const std::string& key) {
    if (contains(key)) throw ParseError("duplicate key '" + key + "'");
    entries_.emplace_back(key, std::make_shared<Value>());
    return *entries_.back().second;
}

inline Value& Table::get_or_create_table(const std::string& key) {
    for (auto& [k, v] : entries_)
        if (k == key) {
            if (!v->is_table()) throw ParseError("key '" + key + "' is not a table");
            return *v;
        }
    auto& v = insert(key);
    v.kind = Value::Kind::Table;
    return v;
}

namespace detail {

inline std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Removes a trailing comment, ignoring '#' inside quoted strings.
inline std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (c == '"') in_string = !in_string;
        else if (c == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

inline std::vector<std::string> split_dotted(const std::string& path, int lineno) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
        if (c == '.') {
            if (cur.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty table-path segment");
            parts.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cur = strip(cur);
    if (cur.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty table-path segment");
    parts.push_back(cur);
    return parts;
}

inline bool parse_number(const std::string& text, double& out) {
    if (text.empty()) return false;
    size_t pos = 0;
    try {
        out = std::stod(text, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == text.size();
}

inline void parse_scalar(const std::string& text, Value& v, int lineno) {
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        v.kind = Value::Kind::String;
        v.string = text.substr(1, text.size() - 2);
        return;
    }
    if (text == "true" || text == "false") {
        v.kind = Value::Kind::Boolean;
        v.boolean = (text == "true");
        return;
    }
    double num;
    if (parse_number(text, num)) {
        v.kind = Value::Kind::Number;
        v.number = num;
        return;
    }
    throw ParseError("line " + std::to_string(lineno) + ": cannot parse value '" + text + "'");
}

inline void parse_array(const std::string& inner, Value& v, int lineno) {
    std::vector<std::string> items;
    std::string cur;
    bool in_string = false;
    for (char c : inner) {
        if (c == '"') in_string = !in_string;
        if (c == ',' && !in_string) {
            items.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cur = strip(cur);
    if (!cur.empty()) items.push_back(cur);

    bool all_strings = true, all_numbers = true;
    for (const auto& it : items) {
        if (it.size() >= 2 && it.front() == '"' && it.back() == '"') all_numbers = false;
        else all_strings = false;
    }
    if (items.empty() || all_numbers) {
        v.kind = Value::Kind::NumberArray;
        for (const auto& it : items) {
            double num;
            if (!parse_number(it, num))
                throw ParseError("line " + std::to_string(lineno) + ": bad array element '" + it + "'");
            v.number_array.push_back(num);
        }
    } else if (all_strings) {
        v.kind = Value::Kind::StringArray;
        for (const auto& it : items) v.string_array.push_back(it.substr(1, it.size() - 2));
    } else {
        throw ParseError("line " + std::to_string(lineno) + ": mixed array types");
    }
}

}  // namespace detail

inline Table parse(const std::string& text) {
    Table root;
    Table* current = &root;
    std::string line;
    size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;

        line = detail::strip(detail::strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            bool is_array = line.size() > 1 && line[1] == '[';
            std::string close = is_array ? "]]" : "]";
            if (line.substr(line.size() - close.size()) != close)
                throw ParseError("line " + std::to_string(lineno) + ": unterminated table header");
            std::string path = line.substr(is_array ? 2 : 1, line.size() - 2 * (is_array ? 2 : 1));
            auto parts = detail::split_dotted(path, lineno);
            Table* t = &root;
            for (size_t i = 0; i + 1 < parts.size(); ++i) {
                Value& v = t->get_or_create_table(parts[i]);
                t = &v.table;
            }
            const std::string& leaf = parts.back();
            if (is_array) {
                Value* existing = nullptr;
                for (auto& [k, v] : const_cast<std::vector<Table::Entry>&>(t->entries()))
                    if (k == leaf) existing = v.get();
                if (existing == nullptr) {
                    Value& v = t->insert(leaf);
                    v.kind = Value::Kind::TableArray;
                    v.table_array.emplace_back();
                    current = &v.table_array.back();
                } else {
                    if (existing->kind != Value::Kind::TableArray)
                        throw ParseError("line " + std::to_string(lineno) + ": '" + leaf + "' is not a table array");
                    existing->table_array.emplace_back();
                    current = &existing->table_array.back();
                }
            } else {
                Value& v = t->get_or_create_table(leaf);
                current = &v.table;
            }
            continue;
        }

        size_t eq = std::string::npos;
        {
            bool in_string = false;
            for (size_t i = 0; i < line.size(); ++i) {
                if (line[i] == '"') in_string = !in_string;
                else if (line[i] == '=' && !in_string) { eq = i; break; }
            }
        }
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = detail::strip(line.substr(0, eq));
        std::string val = detail::strip(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");

        Value& v = current->insert(key);
        if (val.front() == '[') {
            if (val.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": unterminated array");
            detail::parse_array(val.substr(1, val.size() - 2), v, lineno);
        } else {
            detail::parse_scalar(val, v, lineno);
        }
    }
    return root;
}

}  // namespace karo::toml
