#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "qwb/error.hpp"

namespace qwb {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

constexpr double kDefaultStateTol = 1e-10;
constexpr double kDefaultDropTol = 1e-12;

// Validated n x n Hermitian PSD trace-one matrix. Construction goes
// through validate() or project(); instances are immutable afterwards.
class DensityMatrix {
  public:
    // Checks Hermiticity, positive semidefiniteness and unit trace within
    // tol; throws NotSquare / NotHermitian / NotPsd / TraceMismatch.
    static DensityMatrix validate(const CMatrix& raw, double tol = kDefaultStateTol);

    // Nearest (Frobenius) state: Hermitize, clip negative eigenvalues,
    // renormalize the trace. Throws ZeroMatrix when everything clips away.
    static DensityMatrix project(const CMatrix& raw);

    // G G^* / Tr(G G^*) with G an n x rank matrix of seeded standard
    // complex Gaussians. Same seed, same matrix, bit for bit.
    static DensityMatrix random(int n, int rank, std::uint64_t seed);

    const CMatrix& matrix() const { return mat_; }
    int dim() const { return static_cast<int>(mat_.rows()); }
    double validation_tol() const { return tol_; }

  private:
    DensityMatrix(CMatrix mat, double tol) : mat_(std::move(mat)), tol_(tol) {}

    CMatrix mat_;
    double tol_;
};

struct SpectralPair {
    double weight;  // > 0, weights sum to 1
    CVector vector; // unit norm
};

struct SpectralDecomposition {
    std::vector<SpectralPair> pairs;

    CMatrix reconstruct(int n) const;
};

// Eigenpairs above drop_tol, weights renormalized to sum 1.
SpectralDecomposition spectral_decomposition(const DensityMatrix& rho,
                                             double drop_tol = kDefaultDropTol);

double hermiticity_defect(const CMatrix& m);

} // namespace qwb
