#pragma once

#include <string>

#include "qwb/conic.hpp"

namespace qwb {

// SDPA sparse (.dat-s) text for the problem. Zero cones have no native
// encoding in the format, so each equality row is rewritten as a +/- pair
// of rows in the leading diagonal block; the rewrite is recorded in a
// header comment that parse_sdpa understands, so an export/parse round
// trip restores the original cone structure. Output is byte-deterministic.
std::string export_sdpa(const ConicProblem& p);

// Inverse of export_sdpa (up to term ordering). Foreign files without the
// header comment parse as plain NonNeg/PSD problems, one cone per block.
// Comment lines starting with '*' or '"' are skipped.
ConicProblem parse_sdpa(const std::string& text);

// Exact structural comparison: same variables, cones, objective, rows.
bool structurally_equal(const ConicProblem& a, const ConicProblem& b);

} // namespace qwb
