#include "qwb/conic.hpp"

#include <cmath>

namespace qwb {

int ConicProblem::num_rows() const {
    int total = 0;
    for (const auto& cone : cones) total += cone.length();
    return total;
}

void ConicProblem::check_well_formed() const {
    for (const auto& cone : cones) {
        if (cone.dim <= 0) fail(ErrorCode::MalformedProblem, "cone with nonpositive dimension");
    }
    if (A.cols() != num_vars)
        fail(ErrorCode::MalformedProblem, "A has " + std::to_string(A.cols()) +
                                              " columns for " + std::to_string(num_vars) +
                                              " variables");
    if (c.size() != num_vars)
        fail(ErrorCode::MalformedProblem, "objective length does not match variable count");
    const int rows = num_rows();
    if (A.rows() != rows || b.size() != rows)
        fail(ErrorCode::MalformedProblem, "row count of A and b must equal total cone length");
}

const char* solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
        case SolveStatus::DualInfeasible: return "DualInfeasible";
        case SolveStatus::MaxIter: return "MaxIter";
        case SolveStatus::NumericalTrouble: return "NumericalTrouble";
    }
    return "Unknown";
}

KktResiduals residuals(const ConicProblem& p, const Solution& sol) {
    if (sol.z.size() != p.num_vars || sol.y.size() != p.num_rows() || sol.s.size() != p.num_rows())
        fail(ErrorCode::DimensionMismatch, "solution does not match problem dimensions");

    KktResiduals r;
    if (p.num_rows() == 0 && p.num_vars == 0) return r;

    const Eigen::VectorXd pr = p.A * sol.z + sol.s - p.b;
    r.primal = pr.norm() / (1.0 + p.b.norm());

    const Eigen::VectorXd dr = p.c + p.A.transpose() * sol.y;
    r.dual = dr.norm() / (1.0 + p.c.norm());

    const double cz = p.c.dot(sol.z);
    const double by = p.b.dot(sol.y);
    r.gap = std::abs(cz + by) / (1.0 + std::abs(cz) + std::abs(by));
    return r;
}

int svec_length(int side) { return side * (side + 1) / 2; }

int svec_index(int i, int j) { return j * (j + 1) / 2 + i; }

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
    const int side = static_cast<int>(m.rows());
    Eigen::VectorXd v(svec_length(side));
    int k = 0;
    for (int j = 0; j < side; ++j)
        for (int i = 0; i <= j; ++i) v(k++) = i == j ? m(i, j) : M_SQRT2 * m(i, j);
    return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v, int side) {
    Eigen::MatrixXd m(side, side);
    int k = 0;
    for (int j = 0; j < side; ++j)
        for (int i = 0; i <= j; ++i) {
            const double val = i == j ? v(k) : v(k) * M_SQRT1_2;
            m(i, j) = val;
            m(j, i) = val;
            ++k;
        }
    return m;
}

} // namespace qwb
