#pragma once

// Line-oriented CSV helpers. The formats we read never quote fields, so a
// plain split is the whole grammar. Blank lines and '#' comments skipped.

#include <string>
#include <utility>
#include <vector>

namespace ctxvuln::detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Returns (1-based line number, stripped content) for every data line.
inline std::vector<std::pair<int, std::string>> csv_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line = (nl == std::string::npos) ? text.substr(pos)
                                                     : text.substr(pos, nl - pos);
        ++line_no;
        std::string s = strip(line);
        if (!s.empty() && s[0] != '#') out.emplace_back(line_no, s);
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return out;
}

}  // namespace ctxvuln::detail
