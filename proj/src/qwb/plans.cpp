#include "qwb/plans.hpp"

#include <cmath>

#include "qwb/rng.hpp"

namespace qwb {

namespace {

void check_plan_dims(const TransportPlan& plan, int n) {
    for (const auto& tr : plan.triples)
        if (tr.u.size() != n || tr.v.size() != n)
            fail(ErrorCode::DimensionMismatch, "plan triple dimension does not match states");
}

constexpr double kWeightPruneTol = 1e-12;

} // namespace

FeasibilityReport check_plan(const TransportPlan& plan, const DensityMatrix& rho,
                             const DensityMatrix& nu, double tol) {
    if (rho.dim() != nu.dim())
        fail(ErrorCode::DimensionMismatch, "states have different dimensions");
    const int n = rho.dim();
    check_plan_dims(plan, n);

    FeasibilityReport rep;
    rep.tolerance = tol;

    double wsum = 0.0;
    CMatrix mrho = CMatrix::Zero(n, n), mnu = CMatrix::Zero(n, n);
    for (const auto& tr : plan.triples) {
        wsum += tr.weight;
        rep.max_norm_error = std::max(
            {rep.max_norm_error, std::abs(tr.u.norm() - 1.0), std::abs(tr.v.norm() - 1.0)});
        mrho += tr.weight * (tr.u * tr.u.adjoint());
        mnu += tr.weight * (tr.v * tr.v.adjoint());
    }
    rep.weight_sum_error = std::abs(wsum - 1.0);
    rep.rho_residual = (mrho - rho.matrix()).norm();
    rep.nu_residual = (mnu - nu.matrix()).norm();
    rep.feasible = rep.weight_sum_error <= tol && rep.max_norm_error <= tol &&
                   rep.rho_residual <= tol && rep.nu_residual <= tol;
    return rep;
}

double plan_cost(const TransportPlan& plan, CostConvention conv) {
    if (!plan.triples.empty()) check_plan_dims(plan, plan.dim());
    double cost = 0.0;
    for (const auto& tr : plan.triples) cost += tr.weight * eval_cost(conv, tr.u, tr.v);
    return cost;
}

TransportPlan product_plan(const DensityMatrix& rho, const DensityMatrix& nu) {
    if (rho.dim() != nu.dim())
        fail(ErrorCode::DimensionMismatch, "states have different dimensions");
    const SpectralDecomposition drho = spectral_decomposition(rho);
    const SpectralDecomposition dnu = spectral_decomposition(nu);
    TransportPlan plan;
    plan.triples.reserve(drho.pairs.size() * dnu.pairs.size());
    for (const auto& pr : drho.pairs)
        for (const auto& pn : dnu.pairs)
            plan.triples.push_back({pr.weight * pn.weight, pr.vector, pn.vector});
    return plan;
}

std::vector<std::pair<CVector, CVector>> sample_atoms(int n, int count, std::uint64_t seed) {
    if (n < 1 || count < 1) fail(ErrorCode::InvalidArgument, "sample_atoms needs n, count >= 1");
    Rng rng(seed);
    std::vector<std::pair<CVector, CVector>> atoms;
    atoms.reserve(count);
    for (int k = 0; k < count; ++k) {
        CVector u(n), v(n);
        for (int i = 0; i < n; ++i) u(i) = rng.complex_normal();
        for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
        u /= u.norm();
        v /= v.norm();
        atoms.emplace_back(std::move(u), std::move(v));
    }
    return atoms;
}

LpBound lp_upper_bound(const DensityMatrix& rho, const DensityMatrix& nu,
                       const std::vector<std::pair<CVector, CVector>>& atoms, CostConvention conv,
                       const SolverOptions& opts) {
    if (atoms.empty()) fail(ErrorCode::InvalidArgument, "atom list is empty");
    if (rho.dim() != nu.dim())
        fail(ErrorCode::DimensionMismatch, "states have different dimensions");
    const int n = rho.dim();
    const int K = static_cast<int>(atoms.size());
    for (const auto& [u, v] : atoms)
        if (u.size() != n || v.size() != n)
            fail(ErrorCode::DimensionMismatch, "atom dimension does not match states");

    // Equality rows: realified marginals, upper triangles (n^2 per state);
    // then w >= 0 through a NonNeg block.
    const int eq_rows = 2 * n * n;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(eq_rows + K);
    Eigen::VectorXd c(K);

    int row = 0;
    const auto add_side = [&](bool rho_side, const CMatrix& state) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i) {
                for (int k = 0; k < K; ++k) {
                    const CVector& w = rho_side ? atoms[k].first : atoms[k].second;
                    const double coef = (w(i) * std::conj(w(j))).real();
                    if (coef != 0.0) trip.emplace_back(row, k, coef);
                }
                b(row) = state(i, j).real();
                ++row;
            }
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < j; ++i) {
                for (int k = 0; k < K; ++k) {
                    const CVector& w = rho_side ? atoms[k].first : atoms[k].second;
                    const double coef = (w(i) * std::conj(w(j))).imag();
                    if (coef != 0.0) trip.emplace_back(row, k, coef);
                }
                b(row) = state(i, j).imag();
                ++row;
            }
    };
    add_side(true, rho.matrix());
    add_side(false, nu.matrix());

    for (int k = 0; k < K; ++k) {
        trip.emplace_back(eq_rows + k, k, -1.0);
        c(k) = eval_cost(conv, atoms[k].first, atoms[k].second);
    }

    ConicProblem p;
    p.num_vars = K;
    p.c = c;
    p.b = b;
    p.A.resize(eq_rows + K, K);
    p.A.setFromTriplets(trip.begin(), trip.end());
    p.cones = {ConeSpec::zero(eq_rows), ConeSpec::nonneg(K)};

    Solution sol = solve(p, opts);
    if (sol.status == SolveStatus::PrimalInfeasible)
        fail(ErrorCode::AtomSetInfeasible, "atom set cannot represent the marginals");
    if (sol.status != SolveStatus::Optimal)
        fail(ErrorCode::SolverFailed,
             std::string("LP bound solve ended with status ") + solve_status_name(sol.status));

    LpBound out;
    out.value = sol.primal_obj;
    out.weights = sol.z.cwiseMax(0.0);
    for (int k = 0; k < K; ++k) {
        if (out.weights(k) < kWeightPruneTol) {
            out.weights(k) = 0.0;
            continue;
        }
        out.plan.triples.push_back({out.weights(k), atoms[k].first, atoms[k].second});
    }
    return out;
}

} // namespace qwb
