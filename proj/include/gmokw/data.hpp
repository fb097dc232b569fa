#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace gmokw {

struct Dataset {
    std::vector<double> values;
    std::string label;
    std::string source;
    std::size_t size() const { return values.size(); }
};

// Survival times (years) of the chemotherapy-only group, as listed (45 values).
inline const std::vector<double>& chemotherapy_times() {
    static const std::vector<double> v = {
        0.047, 0.115, 0.121, 0.132, 0.164, 0.197, 0.203, 0.260, 0.282, 0.296, 0.334, 0.395,
        0.458, 0.466, 0.501, 0.507, 0.529, 0.534, 0.540, 0.641, 0.644, 0.696, 0.841, 0.863,
        1.099, 1.219, 1.271, 1.326, 1.447, 1.485, 1.553, 1.581, 1.589, 2.178, 2.343, 2.416,
        2.444, 2.825, 2.830, 3.578, 3.658, 3.743, 3.978, 4.003, 4.033};
    return v;
}

inline Dataset bundled_dataset() { return {chemotherapy_times(), "chemotherapy", "bundled"}; }

// Numbers separated by whitespace or commas; '#' starts a comment.
inline Dataset parse_dataset(std::istream& in, std::string label, std::string source) {
    Dataset d{{}, std::move(label), std::move(source)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size())
                throw DataError("line " + std::to_string(lineno) + ": cannot parse '" + tok + "'");
            if (!std::isfinite(v) || !(v > 0.0))
                throw DataError("line " + std::to_string(lineno) + ": value " + tok +
                                " is not a positive number");
            d.values.push_back(v);
        }
    }
    if (d.values.empty()) throw DataError("no observations");
    return d;
}

inline Dataset parse_dataset_string(const std::string& text, std::string label = "inline") {
    std::istringstream in(text);
    return parse_dataset(in, std::move(label), "inline");
}

inline Dataset load_dataset(const std::string& path) {
    if (path == "bundled") return bundled_dataset();
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string label = path;
    if (auto s = label.find_last_of('/'); s != std::string::npos) label = label.substr(s + 1);
    return parse_dataset(in, label, path);
}

}  // namespace gmokw
