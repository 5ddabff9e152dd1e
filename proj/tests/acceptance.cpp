// Acceptance suite: every criterion prints exactly one PASS/FAIL line.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qwb/momentsdp.hpp"
#include "qwb/plans.hpp"
#include "qwb/rng.hpp"
#include "qwb/sdpa.hpp"

using namespace qwb;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  (%s)\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

DensityMatrix state2(double a00, double a01, double a10, double a11) {
    CMatrix m(2, 2);
    m << a00, a01, a10, a11;
    return DensityMatrix::validate(m);
}

struct SolvedInstance {
    std::string name;
    Relaxation rel;
    RelaxationResult res;
};

std::vector<SolvedInstance> g_solved;

RelaxationResult solve_and_track(const std::string& name, const DensityMatrix& rho,
                                 const DensityMatrix& nu, int t, CostConvention conv) {
    Relaxation rel = build_relaxation(rho, nu, t, conv);
    RelaxationResult res = solve_relaxation(rel);
    g_solved.push_back({name, std::move(rel), res});
    return res;
}

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

char buf[512];

} // namespace

// 1. pure-to-pure: t=2 lower bound equals 1 within 1e-5, under 10 s.
static void criterion1() {
    const auto t0 = Clock::now();
    const DensityMatrix rho = state2(1, 0, 0, 0);
    const DensityMatrix nu = state2(0.5, 0.5, 0.5, 0.5);
    const RelaxationResult res =
        solve_and_track("pure-pure/paper/t2", rho, nu, 2, CostConvention::PaperConjugate);
    const double secs = elapsed(t0);
    const bool pass = std::abs(res.lower_bound - 1.0) <= 1e-5 && secs < 10.0;
    std::snprintf(buf, sizeof(buf), "t=2 lower %.8f vs 1 within 1e-5, %.2f s < 10 s",
                  res.lower_bound, secs);
    report(1, pass, buf);
}

// 2. mixed pair: 0.13397 within 1e-4 at t=2 and t=3 for the reproducing
// convention (both conventions run at t=2); sqrt within 1e-4 of 0.36601.
static void criterion2() {
    const DensityMatrix rho = state2(0.75, 0, 0, 0.25);
    const DensityMatrix nu = state2(0.5, 0, 0, 0.5);

    const auto t2_start = Clock::now();
    const RelaxationResult paper =
        solve_and_track("mixed/paper/t2", rho, nu, 2, CostConvention::PaperConjugate);
    const RelaxationResult frob =
        solve_and_track("mixed/frobenius/t2", rho, nu, 2, CostConvention::ProjectorFrobenius);
    const double t2_secs = elapsed(t2_start);

    const double target = 0.13397;
    CostConvention match;
    const char* match_name = nullptr;
    double value_t2 = 0.0;
    if (std::abs(frob.lower_bound - target) <= 1e-4) {
        match = CostConvention::ProjectorFrobenius;
        match_name = "frobenius";
        value_t2 = frob.lower_bound;
    } else if (std::abs(paper.lower_bound - target) <= 1e-4) {
        match = CostConvention::PaperConjugate;
        match_name = "paper";
        value_t2 = paper.lower_bound;
    }

    if (!match_name) {
        std::snprintf(buf, sizeof(buf),
                      "no convention reproduces 0.13397 at t=2: paper %.6f, frobenius %.6f",
                      paper.lower_bound, frob.lower_bound);
        report(2, false, buf);
        return;
    }

    const auto t3_start = Clock::now();
    const RelaxationResult deep =
        solve_and_track(std::string("mixed/") + match_name + "/t3", rho, nu, 3, match);
    const double t3_secs = elapsed(t3_start);

    const double root = std::sqrt(value_t2);
    const bool pass = std::abs(value_t2 - target) <= 1e-4 &&
                      std::abs(deep.lower_bound - target) <= 1e-4 &&
                      std::abs(root - 0.36601) <= 1e-4 && t2_secs < 10.0 && t3_secs < 300.0;
    std::snprintf(buf, sizeof(buf),
                  "'%s' convention: t2 %.6f, t3 %.6f vs 0.13397 within 1e-4; sqrt %.6f vs "
                  "0.36601; t2 %.1f s < 10 s, t3 %.1f s < 300 s (paper-convention value %.6f "
                  "recorded)",
                  match_name, value_t2, deep.lower_bound, root, t2_secs, t3_secs,
                  paper.lower_bound);
    report(2, pass, buf);
}

// 3. saturating pair: t=2 lower bound equals 2 within 1e-5 and the cost
// stays below 2 + 1e-12 on 1e4 sampled bi-sphere points.
static void criterion3() {
    const DensityMatrix rho = state2(0.5, -0.5, -0.5, 0.5);
    const DensityMatrix nu = state2(0.5, 0.5, 0.5, 0.5);
    const RelaxationResult res =
        solve_and_track("saturating/paper/t2", rho, nu, 2, CostConvention::PaperConjugate);

    Rng rng(2024);
    double worst = -1e300;
    for (int k = 0; k < 10000; ++k) {
        CVector x(2), y(2);
        for (int i = 0; i < 2; ++i) x(i) = rng.complex_normal();
        for (int i = 0; i < 2; ++i) y(i) = rng.complex_normal();
        x /= x.norm();
        y /= y.norm();
        worst = std::max(worst, eval_cost(CostConvention::PaperConjugate, x, y));
    }

    const bool pass = std::abs(res.lower_bound - 2.0) <= 1e-5 && worst <= 2.0 + 1e-12;
    std::snprintf(buf, sizeof(buf), "t=2 lower %.8f vs 2 within 1e-5; max sampled cost %.12f <= 2",
                  res.lower_bound, worst);
    report(3, pass, buf);
}

// 4. sandwich on 10 seeded random qubit pairs, plus t3 monotonicity on 3.
static void criterion4() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::string note;
    for (int pair = 0; pair < 10; ++pair) {
        const DensityMatrix rho = DensityMatrix::random(2, 1 + pair % 2, 500 + pair);
        const DensityMatrix nu = DensityMatrix::random(2, 1 + (pair / 3) % 2, 600 + pair);
        const RelaxationResult r2 = solve_and_track(
            "random" + std::to_string(pair) + "/t2", rho, nu, 2, CostConvention::PaperConjugate);

        const TransportPlan prod = product_plan(rho, nu);
        const double plan = plan_cost(prod, CostConvention::PaperConjugate);
        std::vector<std::pair<CVector, CVector>> atoms;
        for (const auto& tr : prod.triples) atoms.emplace_back(tr.u, tr.v);
        auto extra = sample_atoms(2, 300, 800 + pair);
        atoms.insert(atoms.end(), extra.begin(), extra.end());
        const LpBound lp = lp_upper_bound(rho, nu, atoms, CostConvention::PaperConjugate);

        if (!(r2.lower_bound <= lp.value + 1e-6) || !(lp.value <= plan + 1e-6)) {
            pass = false;
            note = "sandwich violated on pair " + std::to_string(pair);
            break;
        }
        if (pair < 3) {
            const RelaxationResult r3 =
                solve_and_track("random" + std::to_string(pair) + "/t3", rho, nu, 3,
                                CostConvention::PaperConjugate);
            if (!(r2.lower_bound <= r3.lower_bound + 2e-6)) {
                pass = false;
                note = "hierarchy not monotone on pair " + std::to_string(pair);
                break;
            }
        }
    }
    const double secs = elapsed(t0);
    if (secs >= 600.0) pass = false;
    std::snprintf(buf, sizeof(buf),
                  "10 pairs: SDP(t2) <= LP <= product within 1e-6; t3 >= t2 - 2e-6 on 3 pairs; "
                  "%.0f s < 600 s%s%s",
                  secs, note.empty() ? "" : "; ", note.c_str());
    report(4, pass, buf);
}

// 5. duality audit across every instance solved above.
static void criterion5() {
    bool pass = true;
    double worst_gap = 0.0, worst_shift = 0.0, worst_moment = -1e300;
    std::string offender;
    for (const auto& inst : g_solved) {
        const DualWitness gauged = dual_witness(inst.rel, inst.res.raw, DualGauge::TraceGammaZero);
        const DualWitness plain = dual_witness(inst.rel, inst.res.raw, DualGauge::None);
        const double gap = std::abs(inst.res.lower_bound - gauged.certified_value);
        const double shift = std::abs(gauged.certified_value - plain.certified_value);
        const double moment = moment_bound_check(inst.rel, inst.res.moments);
        worst_gap = std::max(worst_gap, gap);
        worst_shift = std::max(worst_shift, shift);
        worst_moment = std::max(worst_moment, moment);
        if (gap > 1e-6 || shift > 1e-12 || moment > 1e-6) {
            pass = false;
            if (offender.empty()) offender = inst.name;
        }
    }
    std::snprintf(buf, sizeof(buf),
                  "%zu instances: max |primal-dual| %.2e <= 1e-6; max gauge-shift change %.2e <= "
                  "1e-12; max moment-bound violation %.2e <= 1e-6%s%s",
                  g_solved.size(), worst_gap, worst_shift, worst_moment,
                  offender.empty() ? "" : "; first offender ", offender.c_str());
    report(5, pass, buf);
}

// 6. zero distance, plan feasibility, SDPA round trip.
static void criterion6() {
    bool pass = true;
    std::string note;

    // Bracket collapse for rho = nu under the frobenius convention.
    const DensityMatrix rho = DensityMatrix::random(2, 2, 4242);
    const RelaxationResult res =
        solve_and_track("self/frobenius/t2", rho, rho, 2, CostConvention::ProjectorFrobenius);
    const SpectralDecomposition dec = spectral_decomposition(rho);
    TransportPlan self;
    for (const auto& p : dec.pairs) self.triples.push_back({p.weight, p.vector, p.vector});
    const double upper = plan_cost(self, CostConvention::ProjectorFrobenius);
    if (!(res.lower_bound >= -1e-6 && res.lower_bound <= 1e-6 && upper >= -1e-6 &&
          upper <= 1e-6)) {
        pass = false;
        note += " bracket not collapsed;";
    }

    // Product plans always pass check_plan at 1e-10.
    for (int seed = 0; seed < 10; ++seed) {
        const DensityMatrix a = DensityMatrix::random(2 + seed % 2, 1 + seed % 2, 70 + seed);
        const DensityMatrix b =
            DensityMatrix::random(2 + seed % 2, 1 + (seed / 2) % 2, 90 + seed);
        if (!check_plan(product_plan(a, b), a, b, 1e-10).feasible) {
            pass = false;
            note += " product plan infeasible at seed " + std::to_string(seed) + ";";
            break;
        }
    }

    // SDPA export/parse round trip on the t=2 pure-to-pure instance.
    const Relaxation rel = build_relaxation(state2(1, 0, 0, 0), state2(0.5, 0.5, 0.5, 0.5), 2,
                                            CostConvention::PaperConjugate);
    const ConicProblem parsed = parse_sdpa(export_sdpa(rel.problem));
    if (!structurally_equal(rel.problem, parsed)) {
        pass = false;
        note += " sdpa round trip differs;";
    }

    std::snprintf(buf, sizeof(buf),
                  "rho=nu bracket [%.2e, %.2e] within [-1e-6, 1e-6]; product plans feasible at "
                  "1e-10; sdpa round trip exact%s",
                  res.lower_bound, upper, note.c_str());
    report(6, pass, buf);
}

int main() {
    const auto t0 = Clock::now();
    try {
        criterion1();
        criterion2();
        criterion3();
        criterion4();
        criterion5();
        criterion6();
    } catch (const Error& e) {
        std::printf("acceptance run aborted: %s\n", e.what());
        return 99;
    }
    std::printf("acceptance: %d of 6 criteria passed in %.1f s\n", 6 - g_failures, elapsed(t0));
    return g_failures;
}
