#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qwb/conic.hpp"
#include "qwb/poly.hpp"
#include "qwb/states.hpp"

namespace qwb {

struct PlanTriple {
    double weight; // > 0
    CVector u, v;  // unit vectors of common dimension
};

struct TransportPlan {
    std::vector<PlanTriple> triples;

    int dim() const { return triples.empty() ? 0 : static_cast<int>(triples.front().u.size()); }
};

struct FeasibilityReport {
    double weight_sum_error = 0.0; // |sum w - 1|
    double max_norm_error = 0.0;   // worst | ||u|| - 1 |, | ||v|| - 1 |
    double rho_residual = 0.0;     // || sum w uu* - rho ||_F
    double nu_residual = 0.0;      // || sum w vv* - nu ||_F
    double tolerance = 0.0;
    bool feasible = false;
};

// Diagnostic check: reports residuals, never rejects an infeasible plan.
FeasibilityReport check_plan(const TransportPlan& plan, const DensityMatrix& rho,
                             const DensityMatrix& nu, double tol);

// sum_l w_l f(u_l, v_l) in the chosen convention.
double plan_cost(const TransportPlan& plan, CostConvention conv);

// All spectral pairs (w_l w'_j, u_l, v_j); feasible by construction.
TransportPlan product_plan(const DensityMatrix& rho, const DensityMatrix& nu);

// Seeded uniform pure-state pairs (normalized complex Gaussians).
std::vector<std::pair<CVector, CVector>> sample_atoms(int n, int count, std::uint64_t seed);

struct LpBound {
    double value = 0.0;
    Eigen::VectorXd weights; // over the atom list, tiny weights zeroed
    TransportPlan plan;      // atoms with surviving weights
};

// Discrete-atom restriction of the transport problem:
//   min sum w_k f(u_k, v_k)  s.t.  sum w_k u_k u_k* = rho,
//                                  sum w_k v_k v_k* = nu,  w >= 0.
// Throws AtomSetInfeasible when the atoms cannot represent the marginals.
LpBound lp_upper_bound(const DensityMatrix& rho, const DensityMatrix& nu,
                       const std::vector<std::pair<CVector, CVector>>& atoms, CostConvention conv,
                       const SolverOptions& opts = {});

} // namespace qwb
