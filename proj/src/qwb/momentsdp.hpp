#pragma once

#include <cstdint>
#include <vector>

#include "qwb/basis.hpp"
#include "qwb/conic.hpp"
#include "qwb/poly.hpp"
#include "qwb/states.hpp"

namespace qwb {

// Tags a relaxation equality row with the state entry it pins down, so
// the dual witness can be reassembled from the row multipliers.
struct MarginalRow {
    enum class Part { RhoSym, RhoAsym, NuSym, NuAsym };
    int row = -1;
    Part part;
    int i = 0, j = 0; // entry indices, i <= j (strict for Asym)
};

struct BuildOptions {
    // The L(1) = 1 row is implied by the marginal and sphere rows; keeping
    // it explicit helps conditioning. Disable to drop the redundancy.
    bool normalization_row = true;
};

// The level-t moment relaxation of the transport problem over the
// realified bi-sphere, as a standard-form conic program plus the metadata
// needed to interpret its solution.
struct Relaxation {
    int n = 0;
    int t = 0;
    CostConvention convention = CostConvention::PaperConjugate;
    MonomialBasis basis_t;  // moment matrix index set, C(4n+t, t) monomials
    MonomialBasis basis_2t; // moment variable set, C(4n+2t, 2t) monomials
    Eigen::VectorXd objective; // realified cost over basis_2t
    std::vector<MarginalRow> marginal_rows;
    int normalization_row = -1;
    ConicProblem problem;
    CMatrix rho, nu;

    int moment_matrix_side() const { return basis_t.size(); }
    int num_moment_vars() const { return basis_2t.size(); }
};

Relaxation build_relaxation(const DensityMatrix& rho, const DensityMatrix& nu, int t,
                            CostConvention conv, const BuildOptions& opts = {});

struct MomentVector {
    Eigen::VectorXd values; // indexed by basis_2t

    double normalization() const { return values.size() ? values(0) : 0.0; }
};

struct RelaxationResult {
    double lower_bound = 0.0;
    MomentVector moments;
    Solution raw;
};

// Solves the assembled program; throws SolverFailed unless the backend
// reports Optimal at the requested tolerance.
RelaxationResult solve_relaxation(const Relaxation& rel, const SolverOptions& opts = {});

enum class DualGauge { None, TraceGammaZero };

struct DualWitness {
    CMatrix lambda; // n x n Hermitian
    CMatrix gamma;  // n x n Hermitian
    double certified_value = 0.0; // Tr(rho Lambda + nu Gamma)
};

// Rebuilds (Lambda, Gamma) from the marginal-row multipliers. The
// normalization multiplier is absorbed into Lambda, which is exact on the
// bi-sphere. TraceGammaZero applies the trace shift
// (Lambda, Gamma) -> (Lambda + a I, Gamma - a I) with a = Tr(Gamma)/n;
// the certified value is unchanged by the shift.
DualWitness dual_witness(const Relaxation& rel, const Solution& raw,
                         DualGauge gauge = DualGauge::TraceGammaZero);

// Minimum of f(x,y) - x*Lambda x - y*Gamma y over seeded uniform
// bi-sphere samples; nonnegative (up to solver noise) for a valid witness.
double sample_dual_feasibility(const DualWitness& w, CostConvention conv, int count,
                               std::uint64_t seed);

// Worst violation of |L(w)| <= 2^{deg(w)/2} over the moment variables.
double moment_bound_check(const MonomialBasis& basis_2t, const MomentVector& m);
double moment_bound_check(const Relaxation& rel, const MomentVector& m);

struct FlatnessReport {
    std::vector<std::pair<int, int>> ranks; // (s, numerical rank of M_s)
    bool flat = false;                      // rank M_t == rank M_{t-1}
};

FlatnessReport flatness_report(const Relaxation& rel, const MomentVector& m,
                               double rank_tol = 1e-6);

} // namespace qwb
