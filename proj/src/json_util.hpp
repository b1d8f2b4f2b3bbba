#pragma once

// Internal helpers shared by the parsing/serialization code. Not installed.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ctxvuln/errors.hpp"

namespace ctxvuln::detail {

using json = nlohmann::json;

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError(where + ": missing key \"" + key + "\"");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(where + ": key \"" + key + "\": " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + path);
    out << text;
}

// First non-space character '[' or '{' means JSON; anything else is CSV.
inline bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        return c == '[' || c == '{';
    }
    return false;
}

}  // namespace ctxvuln::detail
