/**
 * Command-line driver. Exit status: 0 success, 1 usage, 2 input validation
 * (algebra axioms, simplicial identities, functoriality, module actions),
 * 3 comparison mismatch. Output is a pure function of the inputs.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hochkit/chains.hpp"

namespace hochkit::cli {

enum Exit : int { ok = 0, usage = 1, invalid = 2, mismatch = 3 };

/// Everything a subcommand may read; unset paths stay empty.
struct RunSpec {
    std::string command;
    std::string algebra, base, base_map, poset, left, right, space = "circle:min", source = "bar", edge;
    std::string out, field;
    int s_max = 3;
    int n_max = 3;
    int p_max = -1; // default s_max + 1
    int sphere = 1;
    int arcs = 2;
    int r_max = 3;
    bool json = false;
};

struct ComparisonReport {
    BettiTable left;
    BettiTable right;
    int window = 0;
    bool agree = false;
    std::optional<std::pair<int, int>> first_mismatch;

    std::string to_json() const;
    std::string to_text() const;
};

/// Builds the report over s ≤ min(requested, both s_valid).
ComparisonReport compare_tables(BettiTable left, BettiTable right, int requested_window);

/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hochkit::cli
