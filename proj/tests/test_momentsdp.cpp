#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "qwb/momentsdp.hpp"
#include "qwb/plans.hpp"
#include "qwb/rng.hpp"

using namespace qwb;

namespace {

DensityMatrix state2(double a00, double a01, double a10, double a11) {
    CMatrix m(2, 2);
    m << a00, a01, a10, a11;
    return DensityMatrix::validate(m);
}

} // namespace

TEST_CASE("relaxation dimensions at t = 2 and t = 3") {
    const DensityMatrix rho = state2(0.75, 0, 0, 0.25);
    const DensityMatrix nu = state2(0.5, 0, 0, 0.5);

    const Relaxation r2 = build_relaxation(rho, nu, 2, CostConvention::PaperConjugate);
    CHECK(r2.moment_matrix_side() == 45);
    CHECK(r2.num_moment_vars() == 495);
    // Rows: 1 normalization + 8 marginal + 45 sphere rows per sphere.
    REQUIRE(r2.problem.cones.size() == 2);
    CHECK(r2.problem.cones[0].kind == ConeSpec::Kind::Zero);
    CHECK(r2.problem.cones[0].dim == 1 + 8 + 2 * 45);
    CHECK(r2.problem.cones[1].kind == ConeSpec::Kind::Psd);
    CHECK(r2.problem.cones[1].dim == 45);
    CHECK(r2.marginal_rows.size() == 8);

    const Relaxation r3 = build_relaxation(rho, nu, 3, CostConvention::PaperConjugate);
    CHECK(r3.moment_matrix_side() == 165);
    CHECK(r3.num_moment_vars() == 3003);
    CHECK(r3.problem.cones[0].dim == 1 + 8 + 2 * 495);
}

TEST_CASE("order below 2 and dimension mismatches are rejected") {
    const DensityMatrix rho = state2(1, 0, 0, 0);
    const DensityMatrix nu = state2(0.5, 0, 0, 0.5);
    try {
        build_relaxation(rho, nu, 1, CostConvention::PaperConjugate);
        FAIL("expected OrderTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OrderTooSmall);
    }

    const DensityMatrix big = DensityMatrix::random(3, 2, 1);
    try {
        build_relaxation(rho, big, 2, CostConvention::PaperConjugate);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("objective matches the realified cost") {
    const DensityMatrix rho = state2(1, 0, 0, 0);
    const DensityMatrix nu = state2(0.5, 0.5, 0.5, 0.5);
    const Relaxation rel = build_relaxation(rho, nu, 2, CostConvention::PaperConjugate);
    const RealPolynomial fr = realify(cost_complex(CostConvention::PaperConjugate, 2));
    double mass = 0;
    for (const auto& [e, c] : fr.terms) {
        const int idx = rel.basis_2t.lookup(e);
        REQUIRE(idx >= 0);
        CHECK(rel.objective(idx) == doctest::Approx(c));
        CHECK(exponents_degree(e) <= 4);
        mass += std::abs(c);
    }
    CHECK(mass > 0);
}

TEST_CASE("pure-to-pure pair solves to 1 at t = 2") {
    const DensityMatrix rho = state2(1, 0, 0, 0);
    const DensityMatrix nu = state2(0.5, 0.5, 0.5, 0.5);
    for (auto conv : {CostConvention::PaperConjugate, CostConvention::ProjectorFrobenius}) {
        const Relaxation rel = build_relaxation(rho, nu, 2, conv);
        const RelaxationResult res = solve_relaxation(rel);
        CHECK(std::abs(res.lower_bound - 1.0) < 1e-5);
        CHECK(std::abs(res.moments.normalization() - 1.0) < 1e-7);

        // Marginal consistency: L(aa' + bb') + i L(ba' - ab') == rho.
        for (const auto& mr : rel.marginal_rows) {
            Eigen::SparseVector<double> row = rel.problem.A.row(mr.row).transpose();
            const double got = row.dot(res.moments.values);
            const double want = rel.problem.b(mr.row);
            CHECK(std::abs(got - want) < 1e-7);
        }

        // Moment matrix PSD at the solution.
        const int side = rel.moment_matrix_side();
        Eigen::MatrixXd mt(side, side);
        for (int v = 0; v < side; ++v)
            for (int u = 0; u <= v; ++u) {
                const double val =
                    res.moments.values(rel.basis_t.product_index(u, v, rel.basis_2t));
                mt(u, v) = val;
                mt(v, u) = val;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mt, Eigen::EigenvaluesOnly);
        CHECK(eig.eigenvalues().minCoeff() > -1e-7);
    }
}

TEST_CASE("mixed pair frozen values at t = 2") {
    const DensityMatrix rho = state2(0.75, 0, 0, 0.25);
    const DensityMatrix nu = state2(0.5, 0, 0, 0.5);

    const RelaxationResult frob =
        solve_relaxation(build_relaxation(rho, nu, 2, CostConvention::ProjectorFrobenius));
    CHECK(std::abs(frob.lower_bound - 0.13397459) < 1e-4);

    // The literal entrywise-conjugate cost dips negative at complex
    // points; its relaxation value is frozen from this implementation.
    const RelaxationResult paper =
        solve_relaxation(build_relaxation(rho, nu, 2, CostConvention::PaperConjugate));
    CHECK(std::abs(paper.lower_bound - (-1.61602542)) < 1e-4);
}

TEST_CASE("identical states solve to 0 under the frobenius convention") {
    const DensityMatrix rho = DensityMatrix::random(2, 2, 42);
    const Relaxation rel = build_relaxation(rho, rho, 2, CostConvention::ProjectorFrobenius);
    const RelaxationResult res = solve_relaxation(rel);
    CHECK(std::abs(res.lower_bound) < 1e-6);
}

TEST_CASE("dual witness certifies the bound") {
    const DensityMatrix rho = state2(1, 0, 0, 0);
    const DensityMatrix nu = state2(0.5, 0.5, 0.5, 0.5);
    const Relaxation rel = build_relaxation(rho, nu, 2, CostConvention::PaperConjugate);
    const RelaxationResult res = solve_relaxation(rel);

    const DualWitness w = dual_witness(rel, res.raw, DualGauge::TraceGammaZero);
    CHECK(hermiticity_defect(w.lambda) < 1e-10);
    CHECK(hermiticity_defect(w.gamma) < 1e-10);
    CHECK(std::abs(w.certified_value - 1.0) < 1e-5);
    CHECK(w.certified_value <= res.lower_bound + 1e-6);
    CHECK(std::abs(w.certified_value - res.lower_bound) < 1e-6);
    CHECK(std::abs(w.gamma.trace().real()) < 1e-10);

    // The gauge shift moves (Lambda, Gamma) but not the certified value.
    const DualWitness raw = dual_witness(rel, res.raw, DualGauge::None);
    CHECK(std::abs(raw.certified_value - w.certified_value) < 1e-12);

    // Manual shift by alpha = 5: Tr(rho - nu) = 0 keeps the value.
    const CMatrix eye = CMatrix::Identity(2, 2);
    const double shifted = ((rho.matrix() * (w.lambda + 5.0 * eye)).trace() +
                            (nu.matrix() * (w.gamma - 5.0 * eye)).trace())
                               .real();
    CHECK(std::abs(shifted - w.certified_value) < 1e-12);

    // Certified witness stays nonnegative on sampled bi-sphere points.
    const double min_resid = sample_dual_feasibility(w, CostConvention::PaperConjugate, 10000, 0);
    CHECK(min_resid >= -1e-6);
}

TEST_CASE("zero witness residuals reproduce the raw cost samples") {
    DualWitness zero;
    zero.lambda = CMatrix::Zero(2, 2);
    zero.gamma = CMatrix::Zero(2, 2);
    zero.certified_value = 0.0;
    const double got = sample_dual_feasibility(zero, CostConvention::PaperConjugate, 2000, 9);

    Rng rng(9);
    double expect = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2000; ++k) {
        CVector x(2), y(2);
        for (int i = 0; i < 2; ++i) x(i) = rng.complex_normal();
        for (int i = 0; i < 2; ++i) y(i) = rng.complex_normal();
        x /= x.norm();
        y /= y.norm();
        expect = std::min(expect, eval_cost(CostConvention::PaperConjugate, x, y));
    }
    CHECK(got == expect); // same seed, same samples, bitwise

    // A trace shift never changes residuals on the bi-sphere.
    DualWitness shifted = zero;
    shifted.lambda += 3.0 * CMatrix::Identity(2, 2);
    shifted.gamma -= 3.0 * CMatrix::Identity(2, 2);
    const double got2 = sample_dual_feasibility(shifted, CostConvention::PaperConjugate, 2000, 9);
    CHECK(std::abs(got2 - got) < 1e-12);
}

TEST_CASE("moment bound check") {
    const DensityMatrix rho = state2(0.75, 0, 0, 0.25);
    const DensityMatrix nu = state2(0.5, 0, 0, 0.5);
    const Relaxation rel = build_relaxation(rho, nu, 2, CostConvention::ProjectorFrobenius);
    const RelaxationResult res = solve_relaxation(rel);
    CHECK(moment_bound_check(rel, res.moments) <= 1e-6);

    // Synthetic functional with L(a_1^4) = 17 violates the degree-4 bound
    // 2^2 by 13.
    MomentVector synth;
    synth.values = Eigen::VectorXd::Zero(rel.num_moment_vars());
    synth.values(0) = 1.0;
    Exponents a1_4(8, 0);
    a1_4[0] = 4;
    synth.values(rel.basis_2t.lookup(a1_4)) = 17.0;
    CHECK(moment_bound_check(rel, synth) == doctest::Approx(13.0));
}

TEST_CASE("flatness report") {
    const DensityMatrix rho = state2(1, 0, 0, 0);
    const DensityMatrix nu = state2(0.5, 0.5, 0.5, 0.5);
    const Relaxation rel = build_relaxation(rho, nu, 2, CostConvention::PaperConjugate);

    // Synthetic Dirac moments: all nested ranks are 1.
    {
        Eigen::VectorXd point(8);
        point << 1, 0, 0, 0, M_SQRT1_2, M_SQRT1_2, 0, 0; // (a, b, c, d) on the bi-sphere
        MomentVector dirac;
        dirac.values.resize(rel.num_moment_vars());
        for (int i = 0; i < rel.num_moment_vars(); ++i) {
            double v = 1.0;
            const Exponents& e = rel.basis_2t[i];
            for (int k = 0; k < 8; ++k)
                for (int rep = 0; rep < e[k]; ++rep) v *= point(k);
            dirac.values(i) = v;
        }
        const FlatnessReport rep = flatness_report(rel, dirac, 1e-6);
        REQUIRE(rep.ranks.size() == 2);
        CHECK(rep.ranks[0].second == 1);
        CHECK(rep.ranks[1].second == 1);
        CHECK(rep.flat);
    }

    // The interior-point solution is the analytic center of the optimal
    // face (a phase orbit), so the observed ranks are larger; frozen from
    // this implementation.
    {
        const RelaxationResult res = solve_relaxation(rel);
        const FlatnessReport rep = flatness_report(rel, res.moments, 1e-6);
        REQUIRE(rep.ranks.size() == 2);
        CHECK(rep.ranks[0].first == 1);
        CHECK(rep.ranks[0].second == 5);
        CHECK(rep.ranks[1].second == 13);
        CHECK_FALSE(rep.flat);
    }

    // Mixed pair: report is emitted, ranks nondecreasing.
    {
        const DensityMatrix r2 = state2(0.75, 0, 0, 0.25);
        const DensityMatrix n2 = state2(0.5, 0, 0, 0.5);
        const Relaxation relm = build_relaxation(r2, n2, 2, CostConvention::ProjectorFrobenius);
        const RelaxationResult res = solve_relaxation(relm);
        const FlatnessReport rep = flatness_report(relm, res.moments, 1e-6);
        REQUIRE(rep.ranks.size() == 2);
        CHECK(rep.ranks[0].second <= rep.ranks[1].second);
    }
}

TEST_CASE("sandwich against the product plan") {
    for (int seed = 0; seed < 3; ++seed) {
        const DensityMatrix rho = DensityMatrix::random(2, 1 + seed % 2, 100 + seed);
        const DensityMatrix nu = DensityMatrix::random(2, 2, 200 + seed);
        const Relaxation rel = build_relaxation(rho, nu, 2, CostConvention::PaperConjugate);
        const RelaxationResult res = solve_relaxation(rel);
        const double plan = plan_cost(product_plan(rho, nu), CostConvention::PaperConjugate);
        CHECK(res.lower_bound <= plan + 1e-6);
    }
}
