#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <vector>

#include "qwb/error.hpp"

namespace qwb {

// Cones for the slack vector. PSD blocks live in scaled symmetric
// vectorization (svec): column-major upper triangle, off-diagonal
// entries multiplied by sqrt(2), so side s occupies s(s+1)/2 slots and
// the cone is self-dual under the plain dot product.
struct ConeSpec {
    enum class Kind { Zero, NonNeg, Psd };

    Kind kind;
    int dim; // Zero/NonNeg: number of rows; Psd: matrix side

    int length() const { return kind == Kind::Psd ? dim * (dim + 1) / 2 : dim; }

    static ConeSpec zero(int d) { return {Kind::Zero, d}; }
    static ConeSpec nonneg(int d) { return {Kind::NonNeg, d}; }
    static ConeSpec psd(int side) { return {Kind::Psd, side}; }
};

// minimize <c, z>  subject to  A z + s = b,  s in cones,  z free.
//
// The dual reads: maximize -<b, y> subject to c + A' y = 0 with y free on
// Zero rows, nonnegative on NonNeg rows and PSD (svec) on Psd rows.
struct ConicProblem {
    int num_vars = 0;
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    std::vector<ConeSpec> cones;

    int num_rows() const;

    // Throws MalformedProblem on inconsistent dimensions.
    void check_well_formed() const;
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIter, NumericalTrouble };

const char* solve_status_name(SolveStatus s);

struct KktResiduals {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;

    double worst() const { return std::max(primal, std::max(dual, gap)); }
};

struct SolverOptions {
    double tolerance = 1e-8;
    int max_iterations = 100;
    int verbosity = 0;
    std::uint64_t seed = 0; // reserved; the method is deterministic and ignores it
};

struct Solution {
    SolveStatus status = SolveStatus::NumericalTrouble;
    Eigen::VectorXd z; // primal variables
    Eigen::VectorXd y; // dual multipliers, one per row
    Eigen::VectorXd s; // slacks, one per row (exactly zero on Zero rows)
    double primal_obj = 0.0;
    double dual_obj = 0.0;
    KktResiduals kkt;
    int iterations = 0;
    double solve_seconds = 0.0;
};

// Interior-point solve; see solver.cpp.
Solution solve(const ConicProblem& p, const SolverOptions& opts);

// Recomputes the KKT residuals of a solution from scratch:
//   primal = ||A z + s - b|| / (1 + ||b||)
//   dual   = ||c + A' y||   / (1 + ||c||)
//   gap    = |c'z + b'y|    / (1 + |c'z| + |b'y|)
KktResiduals residuals(const ConicProblem& p, const Solution& sol);

// svec layout helpers.
int svec_length(int side);
int svec_index(int i, int j); // requires i <= j
Eigen::VectorXd svec(const Eigen::MatrixXd& m);
Eigen::MatrixXd smat(const Eigen::VectorXd& v, int side);

} // namespace qwb
