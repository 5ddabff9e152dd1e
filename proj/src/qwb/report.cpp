#include "qwb/report.hpp"

#include <chrono>
#include <json.hpp>

#include "qwb/io.hpp"

namespace qwb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

RunReport run_bounds(const DensityMatrix& rho, const DensityMatrix& nu, const RunOptions& opts) {
    const auto t_start = Clock::now();

    RunReport rep;
    rep.n = rho.dim();
    rep.t = opts.t;
    rep.convention = cost_convention_name(opts.convention);
    rep.gauge = opts.gauge == DualGauge::TraceGammaZero ? "trace-gamma-zero" : "none";
    rep.tolerance = opts.tolerance;
    rep.seed = opts.seed;

    SolverOptions solver_opts;
    solver_opts.tolerance = opts.tolerance;
    solver_opts.max_iterations = opts.max_iterations;
    solver_opts.verbosity = opts.verbosity;
    solver_opts.seed = opts.seed;

    if (opts.compute_lower) {
        const auto t0 = Clock::now();
        const Relaxation rel = build_relaxation(rho, nu, opts.t, opts.convention);
        const RelaxationResult res = solve_relaxation(rel, solver_opts);
        const DualWitness witness = dual_witness(rel, res.raw, opts.gauge);

        rep.has_lower = true;
        rep.lower_bound = res.lower_bound;
        rep.certified_value = witness.certified_value;
        rep.duality_gap = std::abs(res.lower_bound - witness.certified_value);
        rep.dual_min_residual =
            sample_dual_feasibility(witness, opts.convention, opts.dual_samples, opts.seed);
        rep.moment_normalization = res.moments.normalization();
        rep.moment_bound_worst = moment_bound_check(rel, res.moments);
        const FlatnessReport flat = flatness_report(rel, res.moments);
        rep.flatness_ranks = flat.ranks;
        rep.flat = flat.flat;
        rep.kkt = res.raw.kkt;
        rep.iterations = res.raw.iterations;
        rep.lower_seconds = seconds_since(t0);
    }

    if (opts.compute_upper) {
        const auto t0 = Clock::now();
        const TransportPlan prod = product_plan(rho, nu);
        rep.upper_product = plan_cost(prod, opts.convention);

        std::vector<std::pair<CVector, CVector>> atoms;
        atoms.reserve(prod.triples.size() + opts.extra_atoms);
        for (const auto& tr : prod.triples) atoms.emplace_back(tr.u, tr.v);
        if (opts.extra_atoms > 0) {
            auto extra = sample_atoms(rho.dim(), opts.extra_atoms, opts.seed);
            atoms.insert(atoms.end(), std::make_move_iterator(extra.begin()),
                         std::make_move_iterator(extra.end()));
        }
        const LpBound lp = lp_upper_bound(rho, nu, atoms, opts.convention, solver_opts);
        rep.has_upper = true;
        rep.upper_lp = lp.value;
        rep.lp_atoms = static_cast<int>(atoms.size());
        rep.lp_support = static_cast<int>(lp.plan.triples.size());
        rep.upper_seconds = seconds_since(t0);
    }

    if (rep.has_lower) {
        if (rep.lower_bound >= -1e-8) {
            rep.w2_lower_valid = true;
            rep.w2_lower = std::sqrt(std::max(rep.lower_bound, 0.0));
        } else {
            rep.w2_lower_valid = false;
            rep.w2_note = std::string("lower bound is negative under the '") + rep.convention +
                          "' cost convention; W2 square root omitted";
        }
    }

    rep.total_seconds = seconds_since(t_start);
    return rep;
}

std::string report_to_json(const RunReport& rep) {
    using json = nlohmann::ordered_json;

    json doc;
    doc["command"] = rep.command;
    json inputs;
    if (!rep.rho_file.empty()) inputs["rho_file"] = rep.rho_file;
    if (!rep.rho_digest.empty()) inputs["rho_digest"] = rep.rho_digest;
    if (!rep.nu_file.empty()) inputs["nu_file"] = rep.nu_file;
    if (!rep.nu_digest.empty()) inputs["nu_digest"] = rep.nu_digest;
    inputs["n"] = rep.n;
    inputs["t"] = rep.t;
    inputs["convention"] = rep.convention;
    inputs["gauge"] = rep.gauge;
    inputs["tolerance"] = rep.tolerance;
    inputs["seed"] = rep.seed;
    inputs["projected"] = rep.projected;
    doc["inputs"] = std::move(inputs);

    if (rep.has_lower) {
        json lower;
        lower["value"] = rep.lower_bound;
        lower["certified_value"] = rep.certified_value;
        lower["duality_gap"] = rep.duality_gap;
        doc["lower_bound"] = std::move(lower);
    }
    if (rep.has_upper) {
        json upper;
        upper["product_plan"] = rep.upper_product;
        upper["lp"] = rep.upper_lp;
        upper["lp_atoms"] = rep.lp_atoms;
        upper["lp_support"] = rep.lp_support;
        doc["upper_bounds"] = std::move(upper);
    }
    if (rep.has_lower && rep.has_upper)
        doc["bracket"] = json::array({rep.lower_bound, rep.upper_lp});
    if (rep.has_lower) {
        if (rep.w2_lower_valid)
            doc["w2_lower"] = rep.w2_lower;
        else
            doc["w2_warning"] = rep.w2_note;
    }
    if (rep.has_upper) doc["w2_upper"] = std::sqrt(std::max(rep.upper_lp, 0.0));

    if (rep.has_lower) {
        json diags;
        diags["moment_normalization"] = rep.moment_normalization;
        diags["moment_bound_worst_violation"] = rep.moment_bound_worst;
        diags["dual_sample_min_residual"] = rep.dual_min_residual;
        json ranks = json::array();
        for (const auto& [s, r] : rep.flatness_ranks)
            ranks.push_back(json::array({s, r}));
        diags["flatness_ranks"] = std::move(ranks);
        diags["flat"] = rep.flat;
        diags["kkt"] = {{"primal", rep.kkt.primal}, {"dual", rep.kkt.dual}, {"gap", rep.kkt.gap}};
        diags["solver_iterations"] = rep.iterations;
        doc["diagnostics"] = std::move(diags);
    }

    const std::string digest = fnv1a_hex(doc.dump());
    json timings;
    timings["lower_seconds"] = rep.lower_seconds;
    timings["upper_seconds"] = rep.upper_seconds;
    timings["total_seconds"] = rep.total_seconds;
    doc["timings"] = std::move(timings);
    doc["content_digest"] = digest;
    return doc.dump(2) + "\n";
}

} // namespace qwb
