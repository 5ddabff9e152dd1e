#include "qwb/momentsdp.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "qwb/rng.hpp"

namespace qwb {

namespace {

// Exponent vector with a_i (block 0), b_i (block 1), c_i (block 2),
// d_i (block 3) bumped by the given amounts.
Exponents bump(int n, std::initializer_list<std::pair<int, int>> vars) {
    Exponents e(4 * n, 0);
    for (const auto& [var, amount] : vars) e[var] = static_cast<std::uint8_t>(e[var] + amount);
    return e;
}

} // namespace

Relaxation build_relaxation(const DensityMatrix& rho, const DensityMatrix& nu, int t,
                            CostConvention conv, const BuildOptions& opts) {
    if (rho.dim() != nu.dim())
        fail(ErrorCode::DimensionMismatch, "states have dimensions " + std::to_string(rho.dim()) +
                                               " and " + std::to_string(nu.dim()));
    if (t < 2) fail(ErrorCode::OrderTooSmall, "relaxation order must be >= 2 (cost has degree 4)");

    const int n = rho.dim();
    const int k = 4 * n;

    Relaxation rel;
    rel.n = n;
    rel.t = t;
    rel.convention = conv;
    rel.rho = rho.matrix();
    rel.nu = nu.matrix();
    rel.basis_t = MonomialBasis(k, t);
    rel.basis_2t = MonomialBasis(k, 2 * t);

    const int num_vars = rel.basis_2t.size();
    const int side = rel.basis_t.size();

    // Objective: realified cost coefficients scattered over basis_2t.
    rel.objective = Eigen::VectorXd::Zero(num_vars);
    const RealPolynomial cost = realify(cost_complex(conv, n));
    for (const auto& [e, coef] : cost.terms) {
        const int idx = rel.basis_2t.lookup(e);
        if (idx < 0) fail(ErrorCode::MalformedProblem, "cost monomial outside basis");
        rel.objective(idx) += coef;
    }

    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> b;
    int row = 0;

    // (iv) normalization L(1) = 1.
    if (opts.normalization_row) {
        rel.normalization_row = row;
        trip.emplace_back(row, rel.basis_2t.lookup(Exponents(k, 0)), 1.0);
        b.push_back(1.0);
        ++row;
    }

    // (iii) marginal equalities, upper triangles; realified split
    //   L(aa' + bb') = Re(rho), L(ba' - ab') = Im(rho), likewise for nu.
    const auto add_marginals = [&](const CMatrix& state, int var0, MarginalRow::Part sym,
                                   MarginalRow::Part asym) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i) {
                trip.emplace_back(row, rel.basis_2t.lookup(bump(n, {{var0 + i, 1}, {var0 + j, 1}})),
                                  1.0);
                trip.emplace_back(
                    row, rel.basis_2t.lookup(bump(n, {{var0 + n + i, 1}, {var0 + n + j, 1}})), 1.0);
                b.push_back(state(i, j).real());
                rel.marginal_rows.push_back({row, sym, i, j});
                ++row;
            }
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < j; ++i) {
                // (ba' - ab')_{ij} = b_i a_j - a_i b_j
                trip.emplace_back(
                    row, rel.basis_2t.lookup(bump(n, {{var0 + j, 1}, {var0 + n + i, 1}})), 1.0);
                trip.emplace_back(
                    row, rel.basis_2t.lookup(bump(n, {{var0 + i, 1}, {var0 + n + j, 1}})), -1.0);
                b.push_back(state(i, j).imag());
                rel.marginal_rows.push_back({row, asym, i, j});
                ++row;
            }
    };
    add_marginals(rel.rho, 0, MarginalRow::Part::RhoSym, MarginalRow::Part::RhoAsym);
    add_marginals(rel.nu, 2 * n, MarginalRow::Part::NuSym, MarginalRow::Part::NuAsym);

    // (ii) sphere ideal rows: L(g m) = 0 for g in {1 - |a|^2 - |b|^2,
    // 1 - |c|^2 - |d|^2} and every monomial m of degree <= 2t - 2.
    const MonomialBasis multipliers(k, 2 * t - 2);
    const auto add_sphere = [&](int var0) {
        for (int mi = 0; mi < multipliers.size(); ++mi) {
            const Exponents& m = multipliers[mi];
            trip.emplace_back(row, rel.basis_2t.lookup(m), 1.0);
            for (int i = 0; i < 2 * n; ++i) {
                Exponents e = m;
                e[var0 + i] = static_cast<std::uint8_t>(e[var0 + i] + 2);
                trip.emplace_back(row, rel.basis_2t.lookup(e), -1.0);
            }
            b.push_back(0.0);
            ++row;
        }
    };
    add_sphere(0);
    add_sphere(2 * n);

    const int num_eq = row;

    // (i) moment matrix PSD block: svec(M_t(L)) with
    // M_t(L)[u,v] = L(m_u m_v); repeated products share one variable.
    for (int v = 0; v < side; ++v)
        for (int u = 0; u <= v; ++u) {
            const int idx = rel.basis_t.product_index(u, v, rel.basis_2t);
            trip.emplace_back(row, idx, u == v ? -1.0 : -M_SQRT2);
            b.push_back(0.0);
            ++row;
        }

    ConicProblem& p = rel.problem;
    p.num_vars = num_vars;
    p.c = rel.objective;
    p.b = Eigen::Map<Eigen::VectorXd>(b.data(), row);
    p.A.resize(row, num_vars);
    p.A.setFromTriplets(trip.begin(), trip.end());
    p.cones = {ConeSpec::zero(num_eq), ConeSpec::psd(side)};
    p.check_well_formed();
    return rel;
}

RelaxationResult solve_relaxation(const Relaxation& rel, const SolverOptions& opts) {
    Solution raw = solve(rel.problem, opts);
    if (raw.status != SolveStatus::Optimal) {
        std::ostringstream os;
        os << "relaxation solve ended with status " << solve_status_name(raw.status)
           << " (kkt " << raw.kkt.primal << ", " << raw.kkt.dual << ", " << raw.kkt.gap << ")";
        fail(ErrorCode::SolverFailed, os.str());
    }
    RelaxationResult res;
    res.lower_bound = raw.primal_obj;
    res.moments.values = raw.z;
    res.raw = std::move(raw);
    return res;
}

DualWitness dual_witness(const Relaxation& rel, const Solution& raw, DualGauge gauge) {
    if (raw.status != SolveStatus::Optimal || raw.y.size() != rel.problem.num_rows())
        fail(ErrorCode::NoDualAvailable, "no dual multipliers available");

    const int n = rel.n;
    CMatrix lambda = CMatrix::Zero(n, n);
    CMatrix gamma = CMatrix::Zero(n, n);

    for (const auto& mr : rel.marginal_rows) {
        const double y = raw.y(mr.row);
        const bool is_rho =
            mr.part == MarginalRow::Part::RhoSym || mr.part == MarginalRow::Part::RhoAsym;
        CMatrix& target = is_rho ? lambda : gamma;
        if (mr.part == MarginalRow::Part::RhoSym || mr.part == MarginalRow::Part::NuSym) {
            if (mr.i == mr.j) {
                target(mr.i, mr.i) += -y;
            } else {
                target(mr.i, mr.j) += std::complex<double>(-y / 2, 0);
                target(mr.j, mr.i) += std::complex<double>(-y / 2, 0);
            }
        } else {
            target(mr.i, mr.j) += std::complex<double>(0, -y / 2);
            target(mr.j, mr.i) += std::complex<double>(0, y / 2);
        }
    }
    if (rel.normalization_row >= 0) {
        const double alpha = -raw.y(rel.normalization_row);
        lambda += alpha * CMatrix::Identity(n, n);
    }

    if (gauge == DualGauge::TraceGammaZero) {
        const double shift = gamma.trace().real() / n;
        lambda += shift * CMatrix::Identity(n, n);
        gamma -= shift * CMatrix::Identity(n, n);
    }

    DualWitness w;
    w.lambda = lambda;
    w.gamma = gamma;
    w.certified_value = ((rel.rho * lambda).trace() + (rel.nu * gamma).trace()).real();
    return w;
}

double sample_dual_feasibility(const DualWitness& w, CostConvention conv, int count,
                               std::uint64_t seed) {
    if (count < 1) fail(ErrorCode::InvalidArgument, "sample count must be >= 1");
    const int n = static_cast<int>(w.lambda.rows());
    Rng rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    CVector x(n), y(n);
    for (int k = 0; k < count; ++k) {
        for (int i = 0; i < n; ++i) x(i) = rng.complex_normal();
        for (int i = 0; i < n; ++i) y(i) = rng.complex_normal();
        x /= x.norm();
        y /= y.norm();
        const double fx = eval_cost(conv, x, y);
        const double quad = (x.dot(w.lambda * x) + y.dot(w.gamma * y)).real();
        worst = std::min(worst, fx - quad);
    }
    return worst;
}

double moment_bound_check(const MonomialBasis& basis_2t, const MomentVector& m) {
    if (m.values.size() != basis_2t.size())
        fail(ErrorCode::DimensionMismatch, "moment vector does not match basis");
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < basis_2t.size(); ++i) {
        const int deg = exponents_degree(basis_2t[i]);
        worst = std::max(worst, std::abs(m.values(i)) - std::pow(2.0, deg / 2.0));
    }
    return worst;
}

double moment_bound_check(const Relaxation& rel, const MomentVector& m) {
    return moment_bound_check(rel.basis_2t, m);
}

FlatnessReport flatness_report(const Relaxation& rel, const MomentVector& m, double rank_tol) {
    if (m.values.size() != rel.basis_2t.size())
        fail(ErrorCode::DimensionMismatch, "moment vector does not match relaxation");

    FlatnessReport report;
    int prev_rank = -1, last_rank = -1;
    for (int s = 1; s <= rel.t; ++s) {
        // Graded ordering makes basis_s a prefix of basis_t.
        const int side = static_cast<int>(binomial(4 * rel.n + s, s));
        Eigen::MatrixXd ms(side, side);
        for (int v = 0; v < side; ++v)
            for (int u = 0; u <= v; ++u) {
                const double val = m.values(rel.basis_t.product_index(u, v, rel.basis_2t));
                ms(u, v) = val;
                ms(v, u) = val;
            }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(ms);
        const Eigen::VectorXd& sv = svd.singularValues();
        int rank = 0;
        if (sv.size() > 0 && sv(0) > 0) {
            const double cut = rank_tol * sv(0);
            for (int i = 0; i < sv.size(); ++i)
                if (sv(i) > cut) ++rank;
        }
        report.ranks.emplace_back(s, rank);
        prev_rank = last_rank;
        last_rank = rank;
    }
    report.flat = rel.t >= 2 && prev_rank == last_rank;
    return report;
}

} // namespace qwb
