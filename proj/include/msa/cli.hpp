#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "msa/exact_core.hpp"

namespace msa::cli {

enum class AlphabetMode { bytes, tokens };

// One sequence per line, first line is s_1. Tokens mode splits on whitespace and
// interns tokens in order of first appearance.
std::vector<Sequence> read_sequences(std::istream& in, AlphabetMode mode);

// args excludes the program name. Exit codes: 0 success, 1 gap-infeasible or
// threshold exceeded, 2 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace msa::cli
