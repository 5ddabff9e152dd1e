#include "qwb/states.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "qwb/rng.hpp"

namespace qwb {

double hermiticity_defect(const CMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix DensityMatrix::validate(const CMatrix& raw, double tol) {
    if (raw.rows() != raw.cols()) {
        std::ostringstream os;
        os << "state matrix is " << raw.rows() << "x" << raw.cols() << ", expected square";
        fail(ErrorCode::NotSquare, os.str());
    }
    if (tol < 0) fail(ErrorCode::InvalidArgument, "validation tolerance must be >= 0");

    const double herm = hermiticity_defect(raw);
    if (herm > tol) {
        std::ostringstream os;
        os << "not Hermitian: max |M - M*| = " << herm << " > tol " << tol;
        fail(ErrorCode::NotHermitian, os.str());
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(raw, Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -tol) {
        std::ostringstream os;
        os << "not positive semidefinite: min eigenvalue = " << min_eig;
        fail(ErrorCode::NotPsd, os.str());
    }

    const double trace = raw.trace().real();
    if (std::abs(raw.trace().imag()) > tol || std::abs(trace - 1.0) > tol) {
        std::ostringstream os;
        os << "trace is " << trace << ", expected 1 within " << tol;
        fail(ErrorCode::TraceMismatch, os.str());
    }

    return DensityMatrix(raw, tol);
}

DensityMatrix DensityMatrix::project(const CMatrix& raw) {
    if (raw.rows() != raw.cols()) fail(ErrorCode::NotSquare, "cannot project a non-square matrix");

    const CMatrix herm = 0.5 * (raw + raw.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
    Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0);
    const double total = vals.sum();
    if (total <= 1e-14) fail(ErrorCode::ZeroMatrix, "projection clipped the matrix to zero");
    vals /= total;

    CMatrix out = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
    // Scrub rounding noise so the result revalidates at the default tolerance.
    out = 0.5 * (out + out.adjoint());
    return DensityMatrix(out, kDefaultStateTol);
}

DensityMatrix DensityMatrix::random(int n, int rank, std::uint64_t seed) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
    if (rank < 1 || rank > n) {
        std::ostringstream os;
        os << "rank " << rank << " outside [1, " << n << "]";
        fail(ErrorCode::BadRank, os.str());
    }

    Rng rng(seed);
    CMatrix g(n, rank);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = rng.complex_normal();

    CMatrix m = g * g.adjoint();
    m /= m.trace().real();
    m = 0.5 * (m + m.adjoint());
    return DensityMatrix(m, kDefaultStateTol);
}

CMatrix SpectralDecomposition::reconstruct(int n) const {
    CMatrix sum = CMatrix::Zero(n, n);
    for (const auto& p : pairs) sum += p.weight * (p.vector * p.vector.adjoint());
    return sum;
}

SpectralDecomposition spectral_decomposition(const DensityMatrix& rho, double drop_tol) {
    if (drop_tol < 0 || drop_tol > 1e-6)
        fail(ErrorCode::InvalidArgument, "drop_tol must lie in [0, 1e-6]");

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho.matrix());

    SpectralDecomposition out;
    double kept = 0.0;
    for (int i = 0; i < eig.eigenvalues().size(); ++i) {
        const double w = eig.eigenvalues()(i);
        if (w > drop_tol) {
            CVector v = eig.eigenvectors().col(i);
            out.pairs.push_back({w, v / v.norm()});
            kept += w;
        }
    }
    for (auto& p : out.pairs) p.weight /= kept;
    return out;
}

} // namespace qwb
