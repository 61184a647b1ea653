#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "msa/exact_core.hpp"

// letters map to symbol ids 'a' -> 0, 'b' -> 1, ...
inline std::vector<msa::Sequence> S(std::initializer_list<std::string> words) {
    std::vector<msa::Seq> raw;
    for (const auto& w : words) {
        msa::Seq s;
        for (char c : w) s.push_back(c - 'a');
        raw.push_back(s);
    }
    return msa::make_sequences(raw);
}

inline std::vector<msa::Sequence> random_strings(std::mt19937_64& g, int m, int n, int sigma) {
    std::uniform_int_distribution<int> sym(0, sigma - 1);
    std::vector<msa::Seq> raw(static_cast<size_t>(m));
    for (auto& s : raw) {
        s.resize(static_cast<size_t>(n));
        for (auto& c : s) c = sym(g);
    }
    return msa::make_sequences(raw);
}
