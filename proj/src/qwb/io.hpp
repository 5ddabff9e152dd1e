#pragma once

#include <string>

#include "qwb/plans.hpp"
#include "qwb/states.hpp"

namespace qwb {

// State file: JSON text with fields `n` (integer), `re` (n x n array of
// reals) and optional `im` (n x n, defaults to zero).
CMatrix load_state_matrix(const std::string& path);
void save_state_matrix(const std::string& path, const CMatrix& m);

// Plan file: JSON text with field `triples`, a list of objects
// {w, u_re, u_im, v_re, v_im} with length-n real arrays.
TransportPlan load_plan(const std::string& path);
void save_plan(const std::string& path, const TransportPlan& plan);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit content digest, as 16 hex characters.
std::string fnv1a_hex(const std::string& content);

} // namespace qwb
