#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

#include "qwb/conic.hpp"

// OpenBLAS provides the LAPACK entry points; only these two are needed.
extern "C" {
void dsytrf_(const char* uplo, const int* n, double* a, const int* lda, int* ipiv, double* work,
             const int* lwork, int* info);
void dsytrs_(const char* uplo, const int* n, const int* nrhs, const double* a, const int* lda,
             const int* ipiv, double* b, const int* ldb, int* info);
void openblas_set_num_threads(int);
}

namespace qwb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepScale = 0.99;
constexpr double kStepMin = 1e-7;
constexpr double kStepMax = 0.9999;
constexpr double kSigmaMin = 1e-4;
constexpr double kSigmaMax = 0.999;
constexpr double kStaticReg = 1e-10;
constexpr int kRefinementRounds = 8;
constexpr double kPresBlowup = 500.0;

void fix_blas_threads() {
    static const bool done = [] {
        int threads = 2;
        if (const char* env = std::getenv("QWB_BLAS_THREADS")) {
            const int parsed = std::atoi(env);
            if (parsed >= 1 && parsed <= 64) threads = parsed;
        }
        openblas_set_num_threads(threads);
        return true;
    }();
    (void)done;
}

// One block of the conic (non-equality) part, with its current
// Nesterov-Todd scaling state.
struct Block {
    ConeSpec::Kind kind;
    int dim;    // NonNeg: rows; Psd: side
    int offset; // row offset inside the conic part

    int length() const { return kind == ConeSpec::Kind::Psd ? dim * (dim + 1) / 2 : dim; }

    // NonNeg scaling
    Eigen::VectorXd w; // sqrt(s ./ z)

    // Psd scaling: r' Z r = Lambda, r^{-1} S r^{-T} = Lambda
    Eigen::MatrixXd r, rinv, t, tinv;
    Eigen::VectorXd lam;
};

struct Cell {
    int u, v;    // upper-triangle coordinates, u <= v
    double mval; // matrix-space value of the G entry (svec scaling removed)
};

// Per-column structure of G restricted to one PSD block.
struct PsdColumns {
    std::vector<int> cols;               // columns with support in this block
    std::vector<std::vector<Cell>> cells; // parallel to cols
};

class Hsde {
  public:
    Hsde(const ConicProblem& prob, const SolverOptions& opts) : prob_(prob), opts_(opts) {
        split_rows();
        build_column_structure();
    }

    Solution run();

  private:
    // ---- problem splitting -------------------------------------------------

    void split_rows() {
        nv_ = prob_.num_vars;
        std::vector<Eigen::Triplet<double>> eq_trip, cone_trip;
        std::vector<double> beq, h;
        eq_of_row_.assign(prob_.num_rows(), -1);
        cone_of_row_.assign(prob_.num_rows(), -1);

        int row0 = 0;
        for (const auto& cone : prob_.cones) {
            const int len = cone.length();
            if (cone.kind == ConeSpec::Kind::Zero) {
                for (int i = 0; i < len; ++i) {
                    eq_of_row_[row0 + i] = static_cast<int>(beq.size());
                    beq.push_back(prob_.b(row0 + i));
                }
            } else {
                Block blk;
                blk.kind = cone.kind;
                blk.dim = cone.dim;
                blk.offset = static_cast<int>(h.size());
                blocks_.push_back(blk);
                for (int i = 0; i < len; ++i) {
                    cone_of_row_[row0 + i] = static_cast<int>(h.size());
                    h.push_back(prob_.b(row0 + i));
                }
            }
            row0 += len;
        }

        p_ = static_cast<int>(beq.size());
        m_ = static_cast<int>(h.size());
        beq_ = Eigen::Map<Eigen::VectorXd>(beq.data(), p_);
        h_ = Eigen::Map<Eigen::VectorXd>(h.data(), m_);

        for (int col = 0; col < prob_.A.outerSize(); ++col) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(prob_.A, col); it; ++it) {
                const int row = static_cast<int>(it.row());
                if (eq_of_row_[row] >= 0)
                    eq_trip.emplace_back(eq_of_row_[row], col, it.value());
                else
                    cone_trip.emplace_back(cone_of_row_[row], col, it.value());
            }
        }
        aeq_.resize(p_, nv_);
        aeq_.setFromTriplets(eq_trip.begin(), eq_trip.end());
        g_.resize(m_, nv_);
        g_.setFromTriplets(cone_trip.begin(), cone_trip.end());
        aeq_t_ = aeq_.transpose();
        g_t_ = g_.transpose();

        degree_ = 0;
        for (const auto& blk : blocks_)
            degree_ += blk.kind == ConeSpec::Kind::Psd ? blk.dim : blk.dim;
        if (m_ == 0) fail(ErrorCode::MalformedProblem, "solver requires at least one conic row");
    }

    void build_column_structure() {
        psd_cols_.assign(blocks_.size(), PsdColumns{});
        lp_rows_.clear();
        for (const auto& blk : blocks_) {
            if (blk.kind == ConeSpec::Kind::NonNeg)
                for (int i = 0; i < blk.dim; ++i) lp_rows_.push_back(blk.offset + i);
        }
        lp_index_of_row_.assign(m_, -1);
        for (int i = 0; i < static_cast<int>(lp_rows_.size()); ++i)
            lp_index_of_row_[lp_rows_[i]] = i;

        // Row -> (block, u, v) map for PSD rows.
        std::vector<int> blk_of_row(m_, -1), u_of_row(m_), v_of_row(m_);
        for (int bi = 0; bi < static_cast<int>(blocks_.size()); ++bi) {
            const Block& blk = blocks_[bi];
            if (blk.kind != ConeSpec::Kind::Psd) continue;
            int k = blk.offset;
            for (int j = 0; j < blk.dim; ++j)
                for (int i = 0; i <= j; ++i, ++k) {
                    blk_of_row[k] = bi;
                    u_of_row[k] = i;
                    v_of_row[k] = j;
                }
        }

        for (int col = 0; col < g_.outerSize(); ++col) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(g_, col); it; ++it) {
                const int row = static_cast<int>(it.row());
                if (lp_index_of_row_[row] >= 0) continue;
                const int bi = blk_of_row[row];
                const int u = u_of_row[row], v = v_of_row[row];
                const double mval = u == v ? it.value() : it.value() * M_SQRT1_2;
                auto& pc = psd_cols_[bi];
                if (pc.cols.empty() || pc.cols.back() != col) {
                    pc.cols.push_back(col);
                    pc.cells.emplace_back();
                }
                pc.cells.back().push_back({u, v, mval});
            }
        }
    }

    // ---- cone-wise operations ----------------------------------------------

    void set_identity_scalings() {
        for (auto& blk : blocks_) {
            if (blk.kind == ConeSpec::Kind::NonNeg) {
                blk.w = Eigen::VectorXd::Ones(blk.dim);
            } else {
                blk.r = Eigen::MatrixXd::Identity(blk.dim, blk.dim);
                blk.rinv = blk.r;
                blk.t = blk.r;
                blk.tinv = blk.r;
                blk.lam = Eigen::VectorXd::Ones(blk.dim);
            }
        }
    }

    bool update_scalings(const Eigen::VectorXd& s, const Eigen::VectorXd& z,
                         Eigen::VectorXd& lambda) {
        for (auto& blk : blocks_) {
            if (blk.kind == ConeSpec::Kind::NonNeg) {
                const auto sb = s.segment(blk.offset, blk.dim);
                const auto zb = z.segment(blk.offset, blk.dim);
                if (sb.minCoeff() <= 0.0 || zb.minCoeff() <= 0.0) return false;
                blk.w = (sb.array() / zb.array()).sqrt().matrix();
                lambda.segment(blk.offset, blk.dim) = (sb.array() * zb.array()).sqrt().matrix();
            } else {
                const int pdim = blk.dim;
                const Eigen::MatrixXd S = smat(s.segment(blk.offset, blk.length()), pdim);
                const Eigen::MatrixXd Z = smat(z.segment(blk.offset, blk.length()), pdim);
                Eigen::LLT<Eigen::MatrixXd> ls(S);
                Eigen::LLT<Eigen::MatrixXd> lz(Z);
                if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
                const Eigen::MatrixXd Ls = ls.matrixL();
                const Eigen::MatrixXd Lz = lz.matrixL();
                Eigen::BDCSVD<Eigen::MatrixXd> svd(Lz.transpose() * Ls,
                                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
                const Eigen::VectorXd sig = svd.singularValues();
                if (sig.minCoeff() <= 0.0) return false;
                const Eigen::VectorXd sqrt_sig = sig.cwiseSqrt();

                // r = Lz^{-T} U sqrt(Sigma); rinv = sqrt(Sigma)^{-1} U' Lz'
                blk.r = Lz.transpose().triangularView<Eigen::Upper>().solve(svd.matrixU()) *
                        sqrt_sig.asDiagonal();
                blk.rinv = sqrt_sig.cwiseInverse().asDiagonal() *
                           (svd.matrixU().transpose() * Lz.transpose());
                blk.t.noalias() = blk.r * blk.r.transpose();
                blk.tinv.noalias() = blk.rinv.transpose() * blk.rinv;
                blk.lam = sig;

                Eigen::VectorXd lam_svec = Eigen::VectorXd::Zero(blk.length());
                for (int j = 0, k = 0; j < pdim; ++j)
                    for (int i = 0; i <= j; ++i, ++k)
                        if (i == j) lam_svec(k) = sig(j);
                lambda.segment(blk.offset, blk.length()) = lam_svec;
            }
        }
        return true;
    }

    enum class ScaleOp { W, Wt, V, Vinv };

    Eigen::VectorXd apply_scaling(ScaleOp op, const Eigen::VectorXd& u) const {
        Eigen::VectorXd out(m_);
        for (const auto& blk : blocks_) {
            if (blk.kind == ConeSpec::Kind::NonNeg) {
                const auto ub = u.segment(blk.offset, blk.dim);
                Eigen::ArrayXd w2 = blk.w.array().square();
                switch (op) {
                    case ScaleOp::W:
                    case ScaleOp::Wt: out.segment(blk.offset, blk.dim) = ub.array() * blk.w.array(); break;
                    case ScaleOp::V: out.segment(blk.offset, blk.dim) = ub.array() * w2; break;
                    case ScaleOp::Vinv: out.segment(blk.offset, blk.dim) = ub.array() / w2; break;
                }
            } else {
                const Eigen::MatrixXd U = smat(u.segment(blk.offset, blk.length()), blk.dim);
                Eigen::MatrixXd res;
                switch (op) {
                    case ScaleOp::W: res = blk.r.transpose() * U * blk.r; break;
                    case ScaleOp::Wt: res = blk.r * U * blk.r.transpose(); break;
                    case ScaleOp::V: res = blk.t * U * blk.t; break;
                    case ScaleOp::Vinv: res = blk.tinv * U * blk.tinv; break;
                }
                res = 0.5 * (res + res.transpose()).eval();
                out.segment(blk.offset, blk.length()) = svec(res);
            }
        }
        return out;
    }

    Eigen::VectorXd cone_identity() const {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
        for (const auto& blk : blocks_) {
            if (blk.kind == ConeSpec::Kind::NonNeg) {
                e.segment(blk.offset, blk.dim).setOnes();
            } else {
                for (int j = 0, k = 0; j < blk.dim; ++j)
                    for (int i = 0; i <= j; ++i, ++k)
                        if (i == j) e(blk.offset + k) = 1.0;
            }
        }
        return e;
    }

    Eigen::VectorXd jordan_product(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
        Eigen::VectorXd out(m_);
        for (const auto& blk : blocks_) {
            if (blk.kind == ConeSpec::Kind::NonNeg) {
                out.segment(blk.offset, blk.dim) = u.segment(blk.offset, blk.dim)
                                                       .cwiseProduct(v.segment(blk.offset, blk.dim));
            } else {
                const Eigen::MatrixXd U = smat(u.segment(blk.offset, blk.length()), blk.dim);
                const Eigen::MatrixXd V = smat(v.segment(blk.offset, blk.length()), blk.dim);
                const Eigen::MatrixXd P = 0.5 * (U * V + V * U);
                out.segment(blk.offset, blk.length()) = svec(P);
            }
        }
        return out;
    }

    // Solves lambda o x = d for x, using that lambda is diagonal per block.
    Eigen::VectorXd lambda_divide(const Eigen::VectorXd& lambda, const Eigen::VectorXd& d) const {
        Eigen::VectorXd out(m_);
        for (const auto& blk : blocks_) {
            if (blk.kind == ConeSpec::Kind::NonNeg) {
                out.segment(blk.offset, blk.dim) =
                    d.segment(blk.offset, blk.dim).cwiseQuotient(lambda.segment(blk.offset, blk.dim));
            } else {
                const Eigen::MatrixXd D = smat(d.segment(blk.offset, blk.length()), blk.dim);
                Eigen::MatrixXd X(blk.dim, blk.dim);
                for (int i = 0; i < blk.dim; ++i)
                    for (int j = 0; j < blk.dim; ++j)
                        X(i, j) = 2.0 * D(i, j) / (blk.lam(i) + blk.lam(j));
                out.segment(blk.offset, blk.length()) = svec(X);
            }
        }
        return out;
    }

    // Largest step alpha with lambda + alpha * d staying in the cone.
    double max_step(const Eigen::VectorXd& lambda, const Eigen::VectorXd& d) const {
        double bound = kInf;
        for (const auto& blk : blocks_) {
            if (blk.kind == ConeSpec::Kind::NonNeg) {
                for (int i = 0; i < blk.dim; ++i) {
                    const double q = d(blk.offset + i) / lambda(blk.offset + i);
                    if (q < 0.0) bound = std::min(bound, -1.0 / q);
                }
            } else {
                const Eigen::MatrixXd D = smat(d.segment(blk.offset, blk.length()), blk.dim);
                const Eigen::VectorXd inv_sqrt = blk.lam.cwiseSqrt().cwiseInverse();
                const Eigen::MatrixXd scaled =
                    inv_sqrt.asDiagonal() * D * inv_sqrt.asDiagonal();
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled,
                                                                   Eigen::EigenvaluesOnly);
                const double mineig = eig.eigenvalues().minCoeff();
                if (mineig < 0.0) bound = std::min(bound, -1.0 / mineig);
            }
        }
        return bound;
    }

    // Shifts a point into the cone interior along the identity.
    Eigen::VectorXd bring_to_cone(const Eigen::VectorXd& v) const {
        double alpha = -0.99;
        for (const auto& blk : blocks_) {
            if (blk.kind == ConeSpec::Kind::NonNeg) {
                alpha = std::max(alpha, -v.segment(blk.offset, blk.dim).minCoeff());
            } else {
                const Eigen::MatrixXd M = smat(v.segment(blk.offset, blk.length()), blk.dim);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M, Eigen::EigenvaluesOnly);
                alpha = std::max(alpha, -eig.eigenvalues().minCoeff());
            }
        }
        return v + (1.0 + alpha) * cone_identity();
    }

    // ---- KKT machinery -----------------------------------------------------

    // Factorizes [ H + dI   Aeq' ; Aeq  -dI ] with H = G' V^{-1} G.
    bool factorize() {
        const int N = nv_ + p_;
        if (kkt_.size() == 0) {
            kkt_.resize(N, N);
            ipiv_.resize(N);
        }
        kkt_.setZero();

        // H, PSD block contributions.
        for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
            const Block& blk = blocks_[bi];
            if (blk.kind != ConeSpec::Kind::Psd) continue;
            const auto& pc = psd_cols_[bi];
            const int pdim = blk.dim;
            Eigen::MatrixXd y(pdim, pdim);
            for (std::size_t jj = 0; jj < pc.cols.size(); ++jj) {
                const int j = pc.cols[jj];
                y.setZero();
                for (const Cell& cell : pc.cells[jj]) {
                    y.noalias() +=
                        cell.mval * (blk.tinv.col(cell.u) * blk.tinv.row(cell.v));
                    if (cell.u != cell.v)
                        y.noalias() +=
                            cell.mval * (blk.tinv.col(cell.v) * blk.tinv.row(cell.u));
                }
                for (std::size_t ii = 0; ii <= jj; ++ii) {
                    const int i = pc.cols[ii];
                    double acc = 0.0;
                    for (const Cell& cell : pc.cells[ii])
                        acc += cell.mval * y(cell.u, cell.v) * (cell.u == cell.v ? 1.0 : 2.0);
                    kkt_(std::max(i, j), std::min(i, j)) += acc;
                }
            }
        }

        // H, NonNeg contributions: diag(1/w^2) weighted outer products.
        if (!lp_rows_.empty()) {
            Eigen::VectorXd dinv(lp_rows_.size());
            for (std::size_t i = 0; i < lp_rows_.size(); ++i) {
                const Block* owner = nullptr;
                for (const auto& blk : blocks_)
                    if (blk.kind == ConeSpec::Kind::NonNeg && lp_rows_[i] >= blk.offset &&
                        lp_rows_[i] < blk.offset + blk.dim)
                        owner = &blk;
                const double w = owner->w(lp_rows_[i] - owner->offset);
                dinv(i) = 1.0 / (w * w);
            }
            // Gather LP rows as sparse row list once.
            if (lp_row_entries_.empty()) {
                lp_row_entries_.assign(lp_rows_.size(), {});
                for (int col = 0; col < g_.outerSize(); ++col)
                    for (Eigen::SparseMatrix<double>::InnerIterator it(g_, col); it; ++it) {
                        const int li = lp_index_of_row_[static_cast<int>(it.row())];
                        if (li >= 0) lp_row_entries_[li].push_back({col, it.value()});
                    }
            }
            for (std::size_t r = 0; r < lp_row_entries_.size(); ++r) {
                for (const auto& [ci, vi] : lp_row_entries_[r])
                    for (const auto& [cj, vj] : lp_row_entries_[r]) {
                        if (cj > ci) continue;
                        kkt_(ci, cj) += dinv(r) * vi * vj;
                    }
            }
        }

        for (int i = 0; i < nv_; ++i) kkt_(i, i) += kStaticReg;
        for (int col = 0; col < aeq_.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(aeq_, col); it; ++it)
                kkt_(nv_ + static_cast<int>(it.row()), static_cast<int>(it.col())) = it.value();
        for (int i = nv_; i < N; ++i) kkt_(i, i) = -kStaticReg;

        int info = 0;
        const char uplo = 'L';
        if (work_.empty()) {
            double wsize = 0.0;
            const int query = -1;
            dsytrf_(&uplo, &N, kkt_.data(), &N, ipiv_.data(), &wsize, &query, &info);
            if (info != 0) return false;
            work_.resize(static_cast<std::size_t>(wsize) + 16);
        }
        const int lwork = static_cast<int>(work_.size());
        dsytrf_(&uplo, &N, kkt_.data(), &N, ipiv_.data(), work_.data(), &lwork, &info);
        return info == 0;
    }

    void reduced_solve(const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& dx,
                       Eigen::VectorXd& dy) const {
        const int N = nv_ + p_;
        Eigen::VectorXd rhs(N);
        rhs.head(nv_) = r1;
        rhs.tail(p_) = r2;
        int info = 0;
        const char uplo = 'L';
        const int one = 1;
        dsytrs_(&uplo, &N, &one, kkt_.data(), &N, ipiv_.data(), rhs.data(), &N, &info);
        dx = rhs.head(nv_);
        dy = rhs.tail(p_);
    }

    // Solves the full 3x3 KKT system
    //   [0 A' G'; A 0 0; G 0 -V] (dx, dy, dz) = (bx, by, bz)
    // by eliminating dz, with iterative refinement against the
    // unregularized operator.
    void kkt_solve(const Eigen::VectorXd& bx, const Eigen::VectorXd& by, const Eigen::VectorXd& bz,
                   Eigen::VectorXd& dx, Eigen::VectorXd& dy, Eigen::VectorXd& dz) const {
        dx.setZero(nv_);
        dy.setZero(p_);
        dz.setZero(m_);

        Eigen::VectorXd ex = bx, ey = by, ez = bz;
        double best_err = kInf;
        Eigen::VectorXd best_dx, best_dy, best_dz;
        for (int round = 0; round <= kRefinementRounds; ++round) {
            Eigen::VectorXd r1 = ex + g_t_ * apply_scaling(ScaleOp::Vinv, ez);
            Eigen::VectorXd ddx, ddy;
            reduced_solve(r1, ey, ddx, ddy);
            Eigen::VectorXd ddz = apply_scaling(ScaleOp::Vinv, g_ * ddx - ez);
            dx += ddx;
            dy += ddy;
            dz += ddz;

            ex = bx - aeq_t_ * dy - g_t_ * dz;
            ey = by - aeq_ * dx;
            ez = bz - g_ * dx + apply_scaling(ScaleOp::V, dz);
            const double err = std::max({ex.lpNorm<Eigen::Infinity>(), ey.size() ? ey.lpNorm<Eigen::Infinity>() : 0.0,
                                         ez.lpNorm<Eigen::Infinity>()});
            if (err < best_err) {
                best_err = err;
                best_dx = dx;
                best_dy = dy;
                best_dz = dz;
            }
            const double scale = 1.0 + std::max({bx.lpNorm<Eigen::Infinity>(),
                                                 by.size() ? by.lpNorm<Eigen::Infinity>() : 0.0,
                                                 bz.lpNorm<Eigen::Infinity>()});
            if (err <= 1e-13 * scale) break;
        }
        dx = best_dx;
        dy = best_dy;
        dz = best_dz;
    }

    // ---- main loop ----------------------------------------------------------

    Solution run_impl();

    Solution assemble(SolveStatus status, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& z, const Eigen::VectorXd& s, double tau,
                      int iterations, bool scale_by_tau) const {
        Solution sol;
        sol.status = status;
        const double inv_tau = scale_by_tau ? 1.0 / tau : 1.0;
        sol.z = x * inv_tau;
        sol.y.resize(prob_.num_rows());
        sol.s.resize(prob_.num_rows());
        for (int row = 0; row < prob_.num_rows(); ++row) {
            if (eq_of_row_[row] >= 0) {
                sol.y(row) = y(eq_of_row_[row]) * inv_tau;
                sol.s(row) = 0.0;
            } else {
                sol.y(row) = z(cone_of_row_[row]) * inv_tau;
                sol.s(row) = s(cone_of_row_[row]) * inv_tau;
            }
        }
        sol.primal_obj = prob_.c.dot(sol.z);
        sol.dual_obj = -prob_.b.dot(sol.y);
        sol.kkt = residuals(prob_, sol);
        sol.iterations = iterations;
        return sol;
    }

    const ConicProblem& prob_;
    SolverOptions opts_;

    int nv_ = 0, p_ = 0, m_ = 0, degree_ = 0;
    Eigen::SparseMatrix<double> aeq_, g_, aeq_t_, g_t_;
    Eigen::VectorXd beq_, h_;
    std::vector<Block> blocks_;
    std::vector<int> eq_of_row_, cone_of_row_, lp_rows_, lp_index_of_row_;
    std::vector<PsdColumns> psd_cols_;
    mutable std::vector<std::vector<std::pair<int, double>>> lp_row_entries_;

    mutable Eigen::MatrixXd kkt_;
    mutable std::vector<int> ipiv_;
    mutable std::vector<double> work_;
};

Solution Hsde::run() {
    const auto t0 = std::chrono::steady_clock::now();
    Solution sol = run_impl();
    sol.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

Solution Hsde::run_impl() {
    fix_blas_threads();

    const double tol = opts_.tolerance;
    const double norm_b = beq_.size() ? beq_.norm() : 0.0;
    const double norm_h = h_.norm();
    const double norm_c = prob_.c.norm();

    // Initial point: least-squares primal/dual guesses shifted into the cones.
    set_identity_scalings();
    if (!factorize())
        return assemble(SolveStatus::NumericalTrouble, Eigen::VectorXd::Zero(nv_),
                        Eigen::VectorXd::Zero(p_), Eigen::VectorXd::Zero(m_),
                        Eigen::VectorXd::Zero(m_), 1.0, 0, false);

    Eigen::VectorXd x(nv_), y(p_), z(m_), s(m_);
    {
        Eigen::VectorXd dx, dy, dz;
        kkt_solve(Eigen::VectorXd::Zero(nv_), beq_, h_, dx, dy, dz);
        x = dx;
        s = bring_to_cone(-dz);
        kkt_solve(-prob_.c, Eigen::VectorXd::Zero(p_), Eigen::VectorXd::Zero(m_), dx, dy, dz);
        y = dy;
        z = bring_to_cone(dz);
    }
    double tau = 1.0, kappa = 1.0;

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m_);
    Eigen::VectorXd rx(nv_), ry(p_), rz(m_);
    double rt = 0.0, hresx = 0.0, hresy = 0.0, hresz = 0.0;

    struct Iterate {
        Eigen::VectorXd x, y, z, s;
        double tau = 1.0, kappa = 1.0;
        double score = kInf;
        int iter = 0;
    } best;

    double pres_prev = kInf;
    SolveStatus status = SolveStatus::MaxIter;
    int iter = 0;
    bool have_result = false;

    for (iter = 0; iter <= opts_.max_iterations; ++iter) {
        // Residuals of the embedded system.
        rx = -(aeq_t_ * y) - g_t_ * z;
        hresx = rx.norm();
        rx -= tau * prob_.c;
        ry = aeq_ * x;
        hresy = p_ ? ry.norm() : 0.0;
        ry -= tau * beq_;
        rz = s + g_ * x;
        hresz = rz.norm();
        rz -= tau * h_;
        const double cx = prob_.c.dot(x);
        const double by = p_ ? beq_.dot(y) : 0.0;
        const double hz = h_.dot(z);
        rt = kappa + cx + by + hz;

        const double gap = s.dot(z);
        const double mu = (gap + kappa * tau) / (degree_ + 1);
        const double pcost = cx / tau;
        const double dcost = -(by + hz) / tau;

        const double pres = std::max(p_ ? ry.norm() / (1.0 + norm_b) : 0.0,
                                     rz.norm() / (1.0 + norm_h)) /
                            tau;
        const double dres = rx.norm() / (1.0 + norm_c) / tau;
        const double agap = std::abs(pcost - dcost) / (1.0 + std::abs(pcost) + std::abs(dcost));

        const double nx = x.norm(), ny = p_ ? y.norm() : 0.0, nz = z.norm(), ns = s.norm();
        double pinfres = kInf, dinfres = kInf;
        if ((by + hz) / std::max(ny + nz, 1.0) < -tol)
            pinfres = hresx / std::max(ny + nz, 1.0);
        if (cx / std::max(nx, 1.0) < -tol)
            dinfres = std::max(hresy / std::max(nx, 1.0), hresz / std::max(nx + ns, 1.0));

        if (opts_.verbosity > 0) {
            std::printf("it %3d  pcost %+.6e  dcost %+.6e  pres %.2e  dres %.2e  gap %.2e  "
                        "tau %.2e  kap %.2e  mu %.2e\n",
                        iter, pcost, dcost, pres, dres, agap, tau, kappa, mu);
        }

        const double score = std::max({pres, dres, agap});
        if (score < best.score) {
            best = {x, y, z, s, tau, kappa, score, iter};
        }
        if (iter - best.iter > 10) {
            // No measurable progress for a while; the best iterate is
            // graded against the tolerance below.
            status = SolveStatus::NumericalTrouble;
            break;
        }

        if (pres <= tol && dres <= tol && agap <= tol) {
            status = SolveStatus::Optimal;
            have_result = true;
            break;
        }
        if (pinfres <= tol && tau < kappa) {
            status = SolveStatus::PrimalInfeasible;
            have_result = true;
            break;
        }
        if (dinfres <= tol && tau < kappa) {
            status = SolveStatus::DualInfeasible;
            have_result = true;
            break;
        }
        if (iter > 0 && (pres > kPresBlowup * pres_prev || gap < 0.0)) {
            status = SolveStatus::NumericalTrouble;
            break;
        }
        if (iter == opts_.max_iterations) {
            status = SolveStatus::MaxIter;
            break;
        }
        if (!std::isfinite(pcost) || !std::isfinite(mu)) {
            status = SolveStatus::NumericalTrouble;
            break;
        }
        pres_prev = pres;

        if (!update_scalings(s, z, lambda)) {
            status = SolveStatus::NumericalTrouble;
            break;
        }
        if (!factorize()) {
            status = SolveStatus::NumericalTrouble;
            break;
        }

        // Direction pieces shared by predictor and corrector.
        Eigen::VectorXd dx1, dy1, dz1;
        kkt_solve(-prob_.c, beq_, h_, dx1, dy1, dz1);
        const double dtau_denom =
            kappa / tau - prob_.c.dot(dx1) - (p_ ? beq_.dot(dy1) : 0.0) - h_.dot(dz1);
        if (!std::isfinite(dtau_denom) || std::abs(dtau_denom) < 1e-300) {
            status = SolveStatus::NumericalTrouble;
            break;
        }

        // Predictor (affine) direction.
        Eigen::VectorXd dx2, dy2, dz2;
        kkt_solve(rx, -ry, s - rz, dx2, dy2, dz2);
        const double dtau_aff =
            (rt - kappa + prob_.c.dot(dx2) + (p_ ? beq_.dot(dy2) : 0.0) + h_.dot(dz2)) /
            dtau_denom;
        Eigen::VectorXd dz_aff = dz2 + dtau_aff * dz1;
        Eigen::VectorXd w_dz_aff = apply_scaling(ScaleOp::W, dz_aff);
        Eigen::VectorXd ds_aff_scaled = -w_dz_aff - lambda; // W^{-T} ds
        const double dkap_aff = -kappa - kappa / tau * dtau_aff;

        double alpha_aff = max_step(lambda, ds_aff_scaled);
        alpha_aff = std::min(alpha_aff, max_step(lambda, w_dz_aff));
        if (dtau_aff < 0.0) alpha_aff = std::min(alpha_aff, -tau / dtau_aff);
        if (dkap_aff < 0.0) alpha_aff = std::min(alpha_aff, -kappa / dkap_aff);
        alpha_aff = std::clamp(alpha_aff, kStepMin, 1.0);

        const double sigma =
            std::clamp(std::pow(1.0 - alpha_aff, 3.0), kSigmaMin, kSigmaMax);

        // Corrector (combined) direction.
        Eigen::VectorXd dcomb = jordan_product(lambda, lambda) +
                                jordan_product(ds_aff_scaled, w_dz_aff) -
                                sigma * mu * cone_identity();
        Eigen::VectorXd lam_div = lambda_divide(lambda, dcomb);
        kkt_solve((1.0 - sigma) * rx, -(1.0 - sigma) * ry,
                  -(1.0 - sigma) * rz + apply_scaling(ScaleOp::Wt, lam_div), dx2, dy2, dz2);
        const double bkap = kappa * tau + dkap_aff * dtau_aff - sigma * mu;
        const double dtau = ((1.0 - sigma) * rt - bkap / tau + prob_.c.dot(dx2) +
                             (p_ ? beq_.dot(dy2) : 0.0) + h_.dot(dz2)) /
                            dtau_denom;
        dx2 += dtau * dx1;
        dy2 += dtau * dy1;
        dz2 += dtau * dz1;
        Eigen::VectorXd w_dz = apply_scaling(ScaleOp::W, dz2);
        Eigen::VectorXd ds_scaled = -(lam_div + w_dz);
        const double dkap = -(bkap + kappa * dtau) / tau;

        double alpha = max_step(lambda, ds_scaled);
        alpha = std::min(alpha, max_step(lambda, w_dz));
        if (dtau < 0.0) alpha = std::min(alpha, -tau / dtau);
        if (dkap < 0.0) alpha = std::min(alpha, -kappa / dkap);
        alpha = std::clamp(kStepScale * alpha, kStepMin, kStepMax);

        if (alpha <= kStepMin * 1.0001) {
            status = SolveStatus::NumericalTrouble;
            break;
        }

        const Eigen::VectorXd ds = apply_scaling(ScaleOp::Wt, ds_scaled);
        x += alpha * dx2;
        y += alpha * dy2;
        z += alpha * dz2;
        s += alpha * ds;
        tau += alpha * dtau;
        kappa += alpha * dkap;

        // The embedding is homogeneous; renormalizing the ray to tau = 1
        // keeps all magnitudes balanced when tau would otherwise drift.
        if (tau > 0.0 && std::isfinite(tau)) {
            const double inv = 1.0 / tau;
            x *= inv;
            y *= inv;
            z *= inv;
            s *= inv;
            kappa *= inv;
            tau = 1.0;
        }
    }

    if (!have_result) {
        // Fall back to the best iterate seen and grade it against the
        // requested tolerance.
        x = best.x;
        y = best.y;
        z = best.z;
        s = best.s;
        tau = best.tau;
        kappa = best.kappa;
        Solution candidate = assemble(status, x, y, z, s, tau, iter, true);
        if (candidate.kkt.worst() <= tol) candidate.status = SolveStatus::Optimal;
        return candidate;
    }

    if (status == SolveStatus::Optimal) {
        Solution out = assemble(status, x, y, z, s, tau, iter, true);
        if (out.kkt.worst() > tol) out.status = SolveStatus::NumericalTrouble;
        return out;
    }
    // Infeasibility certificate: report the raw (unscaled) ray.
    return assemble(status, x, y, z, s, tau, iter, false);
}

} // namespace

Solution solve(const ConicProblem& p, const SolverOptions& opts) {
    p.check_well_formed();
    if (opts.tolerance <= 0) fail(ErrorCode::InvalidArgument, "solver tolerance must be > 0");
    Hsde hsde(p, opts);
    return hsde.run();
}

} // namespace qwb
