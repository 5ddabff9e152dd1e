#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwb/momentsdp.hpp"
#include "qwb/plans.hpp"
#include "qwb/states.hpp"

namespace qwb {

struct RunOptions {
    int t = 2;
    CostConvention convention = CostConvention::PaperConjugate;
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
    DualGauge gauge = DualGauge::TraceGammaZero;
    int extra_atoms = 500; // random atoms added to the product atoms for the LP bound
    int max_iterations = 100;
    int verbosity = 0;
    bool compute_lower = true;
    bool compute_upper = true;
    int dual_samples = 10000;
};

struct RunReport {
    std::string command = "bound";
    std::string rho_file, nu_file, rho_digest, nu_digest;
    int n = 0, t = 0;
    std::string convention, gauge;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    bool projected = false;

    bool has_lower = false;
    double lower_bound = 0.0;
    double certified_value = 0.0;
    double duality_gap = 0.0;
    double dual_min_residual = 0.0;
    double moment_normalization = 0.0;
    double moment_bound_worst = 0.0;
    std::vector<std::pair<int, int>> flatness_ranks;
    bool flat = false;
    KktResiduals kkt;
    int iterations = 0;

    bool has_upper = false;
    double upper_product = 0.0;
    double upper_lp = 0.0;
    int lp_atoms = 0;
    int lp_support = 0;

    bool w2_lower_valid = false;
    double w2_lower = 0.0;
    std::string w2_note;

    double lower_seconds = 0.0, upper_seconds = 0.0, total_seconds = 0.0;
};

// Runs the SDP lower bound and/or the plan-based upper bounds and fills a
// report. Throws qwb::Error on validation or solver failure.
RunReport run_bounds(const DensityMatrix& rho, const DensityMatrix& nu, const RunOptions& opts);

// Single structured text document. Timing fields are excluded from the
// embedded content_digest so reruns are comparable.
std::string report_to_json(const RunReport& rep);

} // namespace qwb
