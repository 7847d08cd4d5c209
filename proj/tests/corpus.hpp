#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipl/syntax.hpp"

namespace corpus {

struct Entry {
    bool provable;
    ipl::Sequent sequent;
};

inline std::string data_path(const std::string& name) { return std::string(IPL_TEST_DATA) + "/" + name; }

inline std::vector<Entry> load() {
    std::ifstream in(data_path("corpus.txt"));
    if (!in) throw std::runtime_error("cannot open corpus");
    std::vector<Entry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        out.push_back({line.substr(0, tab) == "provable", ipl::parse_sequent(line.substr(tab + 1))});
    }
    return out;
}

}  // namespace corpus
