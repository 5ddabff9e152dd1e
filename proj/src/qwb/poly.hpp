#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qwb/error.hpp"

namespace qwb {

// Exponent vector. Complex monomials x^a xbar^b y^c ybar^d over C^n are
// stored as four consecutive blocks [a | b | c | d] of length n; real
// monomials over R^k use a plain length-k vector.
using Exponents = std::vector<std::uint8_t>;

int exponents_degree(const Exponents& e);

enum class CostConvention {
    PaperConjugate,     // Tr[(xx* - yy*) . entrywise-conjugate(xx* - yy*)]
    ProjectorFrobenius, // Tr[(xx* - yy*) (xx* - yy*)*], squared Frobenius norm
};

const char* cost_convention_name(CostConvention conv);

// Sparse polynomial in (x, xbar, y, ybar) with complex coefficients.
// Coefficients below the pruning threshold are never stored, so equality
// of polynomials is equality of the underlying maps.
struct ComplexPolynomial {
    int n = 0;
    std::map<Exponents, std::complex<double>> terms;

    int degree() const;
};

constexpr double kCoefPruneTol = 1e-15;

void add_term(ComplexPolynomial& p, const Exponents& e, std::complex<double> coef);

ComplexPolynomial conjugate(const ComplexPolynomial& p);

bool is_hermitian(const ComplexPolynomial& p, double tol);

// The degree-4 transport cost polynomial in either convention; Hermitian
// by construction.
ComplexPolynomial cost_complex(CostConvention conv, int n);

std::complex<double> eval_complex(const ComplexPolynomial& p, const Eigen::VectorXcd& x,
                                  const Eigen::VectorXcd& y);

// Sparse real polynomial over k variables.
struct RealPolynomial {
    int k = 0;
    std::map<Exponents, double> terms;

    int degree() const;
};

void add_term(RealPolynomial& p, const Exponents& e, double coef);

// Real image of a Hermitian polynomial under x = a + ib, y = c + id.
// Variable order of the result: (a_1..a_n, b_1..b_n, c_1..c_n, d_1..d_n).
RealPolynomial realify(const ComplexPolynomial& p);

double eval_real(const RealPolynomial& p, const Eigen::VectorXd& point);

// Packs (x, y) into the 4n-dimensional realified point (a, b, c, d).
Eigen::VectorXd embed_real(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

// Cost evaluated directly on a pure-state pair; real by Hermiticity.
double eval_cost(CostConvention conv, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

} // namespace qwb
