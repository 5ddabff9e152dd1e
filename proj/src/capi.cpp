#include "qwbound.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "qwb/io.hpp"
#include "qwb/momentsdp.hpp"
#include "qwb/plans.hpp"
#include "qwb/report.hpp"
#include "qwb/sdpa.hpp"
#include "qwb/states.hpp"

namespace {

thread_local std::string g_last_error;

qwb_status status_of(qwb::ErrorCode code) {
    using qwb::ErrorCode;
    switch (code) {
        case ErrorCode::NotSquare: return QWB_ERR_NOT_SQUARE;
        case ErrorCode::NotHermitian: return QWB_ERR_NOT_HERMITIAN;
        case ErrorCode::NotPsd: return QWB_ERR_NOT_PSD;
        case ErrorCode::TraceMismatch: return QWB_ERR_TRACE_MISMATCH;
        case ErrorCode::ZeroMatrix: return QWB_ERR_ZERO_MATRIX;
        case ErrorCode::BadRank: return QWB_ERR_BAD_RANK;
        case ErrorCode::DimensionMismatch: return QWB_ERR_DIMENSION_MISMATCH;
        case ErrorCode::OrderTooSmall: return QWB_ERR_ORDER_TOO_SMALL;
        case ErrorCode::SolverFailed: return QWB_ERR_SOLVER_FAILED;
        case ErrorCode::NoDualAvailable: return QWB_ERR_NO_DUAL;
        case ErrorCode::AtomSetInfeasible: return QWB_ERR_ATOMS_INFEASIBLE;
        case ErrorCode::MalformedProblem: return QWB_ERR_MALFORMED_PROBLEM;
        case ErrorCode::UnsupportedCone: return QWB_ERR_UNSUPPORTED_CONE;
        case ErrorCode::ParseError: return QWB_ERR_PARSE;
        case ErrorCode::IoError: return QWB_ERR_IO;
        case ErrorCode::InvalidArgument: return QWB_ERR_INVALID_ARGUMENT;
    }
    return QWB_ERR_INTERNAL;
}

template <typename Fn>
qwb_status guarded(Fn&& fn) {
    try {
        fn();
        return QWB_OK;
    } catch (const qwb::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QWB_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return QWB_ERR_INTERNAL;
    }
}

qwb::CostConvention convention_of(int value) {
    if (value != 0 && value != 1)
        qwb::fail(qwb::ErrorCode::InvalidArgument, "convention must be 0 (paper) or 1 (frobenius)");
    return value == 0 ? qwb::CostConvention::PaperConjugate
                      : qwb::CostConvention::ProjectorFrobenius;
}

qwb::RunOptions run_options_of(const qwb_options* opts) {
    qwb::RunOptions ro;
    if (!opts) return ro;
    ro.t = opts->t;
    ro.convention = convention_of(opts->convention);
    ro.tolerance = opts->tolerance;
    ro.seed = opts->seed;
    ro.gauge = opts->gauge == 0 ? qwb::DualGauge::None : qwb::DualGauge::TraceGammaZero;
    ro.extra_atoms = opts->extra_atoms;
    ro.max_iterations = opts->max_iterations;
    ro.verbosity = opts->verbosity;
    return ro;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

} // namespace

struct qwb_state {
    qwb::DensityMatrix dm;
};

struct qwb_plan {
    qwb::TransportPlan plan;
};

struct qwb_result {
    qwb::RunReport report;
    mutable std::string json;
};

extern "C" {

const char* qwb_last_error(void) { return g_last_error.c_str(); }

const char* qwb_version(void) { return "0.1.0"; }

qwb_status qwb_state_load(const char* path, double tol, int project, qwb_state** out) {
    return guarded([&] {
        if (!path || !out) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        const qwb::CMatrix raw = qwb::load_state_matrix(path);
        qwb::DensityMatrix dm = project ? qwb::DensityMatrix::project(raw)
                                        : qwb::DensityMatrix::validate(raw, tol);
        *out = new qwb_state{std::move(dm)};
    });
}

qwb_status qwb_state_create(int n, const double* re, const double* im, double tol, int project,
                            qwb_state** out) {
    return guarded([&] {
        if (!re || !out || n < 1) qwb::fail(qwb::ErrorCode::InvalidArgument, "bad arguments");
        qwb::CMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = {re[i * n + j], im ? im[i * n + j] : 0.0};
        qwb::DensityMatrix dm =
            project ? qwb::DensityMatrix::project(m) : qwb::DensityMatrix::validate(m, tol);
        *out = new qwb_state{std::move(dm)};
    });
}

qwb_status qwb_state_random(int n, int rank, uint64_t seed, qwb_state** out) {
    return guarded([&] {
        if (!out) qwb::fail(qwb::ErrorCode::InvalidArgument, "null output");
        *out = new qwb_state{qwb::DensityMatrix::random(n, rank, seed)};
    });
}

int qwb_state_dim(const qwb_state* s) { return s ? s->dm.dim() : 0; }

qwb_status qwb_state_entry(const qwb_state* s, int i, int j, double* re, double* im) {
    return guarded([&] {
        if (!s || i < 0 || j < 0 || i >= s->dm.dim() || j >= s->dm.dim())
            qwb::fail(qwb::ErrorCode::InvalidArgument, "index out of range");
        const auto v = s->dm.matrix()(i, j);
        if (re) *re = v.real();
        if (im) *im = v.imag();
    });
}

qwb_status qwb_state_save(const qwb_state* s, const char* path) {
    return guarded([&] {
        if (!s || !path) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        qwb::save_state_matrix(path, s->dm.matrix());
    });
}

void qwb_state_free(qwb_state* s) { delete s; }

void qwb_options_init(qwb_options* opts) {
    if (!opts) return;
    opts->t = 2;
    opts->convention = 0;
    opts->tolerance = 1e-8;
    opts->seed = 0;
    opts->gauge = 1;
    opts->extra_atoms = 500;
    opts->max_iterations = 100;
    opts->verbosity = 0;
}

namespace {

qwb_status run_bounds_capi(const qwb_state* rho, const qwb_state* nu, const qwb_options* opts,
                           bool lower, qwb_result** out) {
    return guarded([&] {
        if (!rho || !nu || !out) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        qwb::RunOptions ro = run_options_of(opts);
        ro.compute_lower = lower;
        ro.compute_upper = true;
        qwb::RunReport rep = qwb::run_bounds(rho->dm, nu->dm, ro);
        rep.command = lower ? "bound" : "upper";
        *out = new qwb_result{std::move(rep), {}};
    });
}

} // namespace

qwb_status qwb_bound(const qwb_state* rho, const qwb_state* nu, const qwb_options* opts,
                     qwb_result** out) {
    return run_bounds_capi(rho, nu, opts, true, out);
}

qwb_status qwb_upper(const qwb_state* rho, const qwb_state* nu, const qwb_options* opts,
                     qwb_result** out) {
    return run_bounds_capi(rho, nu, opts, false, out);
}

double qwb_result_lower_bound(const qwb_result* r) {
    return r && r->report.has_lower ? r->report.lower_bound : kNan;
}

double qwb_result_certified_value(const qwb_result* r) {
    return r && r->report.has_lower ? r->report.certified_value : kNan;
}

double qwb_result_duality_gap(const qwb_result* r) {
    return r && r->report.has_lower ? r->report.duality_gap : kNan;
}

double qwb_result_upper_product(const qwb_result* r) {
    return r && r->report.has_upper ? r->report.upper_product : kNan;
}

double qwb_result_upper_lp(const qwb_result* r) {
    return r && r->report.has_upper ? r->report.upper_lp : kNan;
}

double qwb_result_w2_lower(const qwb_result* r) {
    return r && r->report.has_lower && r->report.w2_lower_valid ? r->report.w2_lower : kNan;
}

double qwb_result_moment_bound_violation(const qwb_result* r) {
    return r && r->report.has_lower ? r->report.moment_bound_worst : kNan;
}

double qwb_result_dual_sample_min(const qwb_result* r) {
    return r && r->report.has_lower ? r->report.dual_min_residual : kNan;
}

qwb_status qwb_result_set_inputs(qwb_result* r, const char* command, const char* rho_file,
                                 const char* nu_file, int projected) {
    return guarded([&] {
        if (!r) qwb::fail(qwb::ErrorCode::InvalidArgument, "null result");
        if (command) r->report.command = command;
        if (rho_file) {
            r->report.rho_file = rho_file;
            r->report.rho_digest = qwb::fnv1a_hex(qwb::read_text_file(rho_file));
        }
        if (nu_file) {
            r->report.nu_file = nu_file;
            r->report.nu_digest = qwb::fnv1a_hex(qwb::read_text_file(nu_file));
        }
        r->report.projected = projected != 0;
        r->json.clear();
    });
}

const char* qwb_result_json(const qwb_result* r) {
    if (!r) return "";
    if (r->json.empty()) r->json = qwb::report_to_json(r->report);
    return r->json.c_str();
}

void qwb_result_free(qwb_result* r) { delete r; }

qwb_status qwb_plan_load(const char* path, qwb_plan** out) {
    return guarded([&] {
        if (!path || !out) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        *out = new qwb_plan{qwb::load_plan(path)};
    });
}

qwb_status qwb_plan_product(const qwb_state* rho, const qwb_state* nu, qwb_plan** out) {
    return guarded([&] {
        if (!rho || !nu || !out) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        *out = new qwb_plan{qwb::product_plan(rho->dm, nu->dm)};
    });
}

qwb_status qwb_plan_save(const qwb_plan* plan, const char* path) {
    return guarded([&] {
        if (!plan || !path) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        qwb::save_plan(path, plan->plan);
    });
}

int qwb_plan_size(const qwb_plan* plan) {
    return plan ? static_cast<int>(plan->plan.triples.size()) : 0;
}

qwb_status qwb_plan_check(const qwb_plan* plan, const qwb_state* rho, const qwb_state* nu,
                          double tol, double* weight_sum_error, double* max_norm_error,
                          double* rho_residual, double* nu_residual, int* feasible) {
    return guarded([&] {
        if (!plan || !rho || !nu) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        const qwb::FeasibilityReport rep = qwb::check_plan(plan->plan, rho->dm, nu->dm, tol);
        if (weight_sum_error) *weight_sum_error = rep.weight_sum_error;
        if (max_norm_error) *max_norm_error = rep.max_norm_error;
        if (rho_residual) *rho_residual = rep.rho_residual;
        if (nu_residual) *nu_residual = rep.nu_residual;
        if (feasible) *feasible = rep.feasible ? 1 : 0;
    });
}

qwb_status qwb_plan_cost(const qwb_plan* plan, int convention, double* cost) {
    return guarded([&] {
        if (!plan || !cost) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        *cost = qwb::plan_cost(plan->plan, convention_of(convention));
    });
}

void qwb_plan_free(qwb_plan* plan) { delete plan; }

qwb_status qwb_export_sdpa(const qwb_state* rho, const qwb_state* nu, const qwb_options* opts,
                           const char* path, int* psd_side, int* num_vars, int* num_rows) {
    return guarded([&] {
        if (!rho || !nu || !path) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        const qwb::RunOptions ro = run_options_of(opts);
        const qwb::Relaxation rel =
            qwb::build_relaxation(rho->dm, nu->dm, ro.t, ro.convention);
        qwb::write_text_file(path, qwb::export_sdpa(rel.problem));
        if (psd_side) *psd_side = rel.moment_matrix_side();
        if (num_vars) *num_vars = rel.num_moment_vars();
        if (num_rows) *num_rows = rel.problem.num_rows();
    });
}

qwb_status qwb_sdpa_roundtrip(const qwb_state* rho, const qwb_state* nu, const qwb_options* opts,
                              const char* path, int* structurally_equal) {
    return guarded([&] {
        if (!rho || !nu || !path) qwb::fail(qwb::ErrorCode::InvalidArgument, "null argument");
        const qwb::RunOptions ro = run_options_of(opts);
        const qwb::Relaxation rel =
            qwb::build_relaxation(rho->dm, nu->dm, ro.t, ro.convention);
        const qwb::ConicProblem parsed = qwb::parse_sdpa(qwb::read_text_file(path));
        if (structurally_equal)
            *structurally_equal = qwb::structurally_equal(rel.problem, parsed) ? 1 : 0;
    });
}

} // extern "C"
