#include "qwb/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qwb {

namespace {

using Complex = std::complex<double>;

void check_dim(int got, int want, const char* what) {
    if (got != want) {
        fail(ErrorCode::DimensionMismatch,
             std::string(what) + ": got length " + std::to_string(got) + ", expected " +
                 std::to_string(want));
    }
}

Complex pow_int(Complex base, int k) {
    Complex r(1.0, 0.0);
    for (int i = 0; i < k; ++i) r *= base;
    return r;
}

double pow_int(double base, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= base;
    return r;
}

} // namespace

int exponents_degree(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), 0, [](int s, std::uint8_t v) { return s + v; });
}

const char* cost_convention_name(CostConvention conv) {
    return conv == CostConvention::PaperConjugate ? "paper" : "frobenius";
}

int ComplexPolynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms) d = std::max(d, exponents_degree(e));
    return d;
}

int RealPolynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms) d = std::max(d, exponents_degree(e));
    return d;
}

void add_term(ComplexPolynomial& p, const Exponents& e, Complex coef) {
    auto it = p.terms.find(e);
    if (it == p.terms.end()) {
        if (std::abs(coef) >= kCoefPruneTol) p.terms.emplace(e, coef);
        return;
    }
    it->second += coef;
    if (std::abs(it->second) < kCoefPruneTol) p.terms.erase(it);
}

void add_term(RealPolynomial& p, const Exponents& e, double coef) {
    auto it = p.terms.find(e);
    if (it == p.terms.end()) {
        if (std::abs(coef) >= kCoefPruneTol) p.terms.emplace(e, coef);
        return;
    }
    it->second += coef;
    if (std::abs(it->second) < kCoefPruneTol) p.terms.erase(it);
}

ComplexPolynomial conjugate(const ComplexPolynomial& p) {
    const int n = p.n;
    ComplexPolynomial out;
    out.n = n;
    for (const auto& [e, c] : p.terms) {
        Exponents f(4 * n);
        for (int i = 0; i < n; ++i) {
            f[i] = e[n + i];         // alpha <- beta
            f[n + i] = e[i];         // beta <- alpha
            f[2 * n + i] = e[3 * n + i]; // gamma <- delta
            f[3 * n + i] = e[2 * n + i]; // delta <- gamma
        }
        out.terms.emplace(std::move(f), std::conj(c));
    }
    return out;
}

bool is_hermitian(const ComplexPolynomial& p, double tol) {
    const ComplexPolynomial q = conjugate(p);
    double worst = 0.0;
    for (const auto& [e, c] : p.terms) {
        auto it = q.terms.find(e);
        const Complex qc = it == q.terms.end() ? Complex(0) : it->second;
        worst = std::max(worst, std::abs(c - qc));
    }
    for (const auto& [e, c] : q.terms) {
        if (!p.terms.count(e)) worst = std::max(worst, std::abs(c));
    }
    return worst <= tol;
}

ComplexPolynomial cost_complex(CostConvention conv, int n) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "cost_complex requires n >= 1");
    ComplexPolynomial f;
    f.n = n;
    const auto mono = [n](int ai, int bi, int ci, int di, int pa, int pb, int pc, int pd) {
        Exponents e(4 * n, 0);
        if (pa) e[ai] += pa;
        if (pb) e[n + bi] += pb;
        if (pc) e[2 * n + ci] += pc;
        if (pd) e[3 * n + di] += pd;
        return e;
    };

    if (conv == CostConvention::PaperConjugate) {
        // (sum x_i^2)(sum xbar_j^2) + (sum y_i^2)(sum ybar_j^2)
        //   - 2 (sum x_i y_i)(sum xbar_j ybar_j)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                add_term(f, mono(i, j, 0, 0, 2, 2, 0, 0), 1.0);
                add_term(f, mono(0, 0, i, j, 0, 0, 2, 2), 1.0);
                add_term(f, mono(i, j, i, j, 1, 1, 1, 1), -2.0);
            }
    } else {
        // (sum x_i xbar_i)^2 + (sum y_i ybar_i)^2
        //   - 2 (sum xbar_i y_i)(sum x_j ybar_j)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Exponents xx(4 * n, 0);
                xx[i] += 1;
                xx[j] += 1;
                xx[n + i] += 1;
                xx[n + j] += 1;
                add_term(f, xx, 1.0);

                Exponents yy(4 * n, 0);
                yy[2 * n + i] += 1;
                yy[2 * n + j] += 1;
                yy[3 * n + i] += 1;
                yy[3 * n + j] += 1;
                add_term(f, yy, 1.0);

                add_term(f, mono(j, i, i, j, 1, 1, 1, 1), -2.0);
            }
    }
    return f;
}

std::complex<double> eval_complex(const ComplexPolynomial& p, const Eigen::VectorXcd& x,
                                  const Eigen::VectorXcd& y) {
    const int n = p.n;
    check_dim(static_cast<int>(x.size()), n, "eval_complex x");
    check_dim(static_cast<int>(y.size()), n, "eval_complex y");

    Complex sum(0.0, 0.0);
    for (const auto& [e, c] : p.terms) {
        Complex v = c;
        for (int i = 0; i < n; ++i) {
            if (e[i]) v *= pow_int(x(i), e[i]);
            if (e[n + i]) v *= pow_int(std::conj(x(i)), e[n + i]);
            if (e[2 * n + i]) v *= pow_int(y(i), e[2 * n + i]);
            if (e[3 * n + i]) v *= pow_int(std::conj(y(i)), e[3 * n + i]);
        }
        sum += v;
    }
    return sum;
}

RealPolynomial realify(const ComplexPolynomial& p) {
    if (!is_hermitian(p, 1e-12))
        fail(ErrorCode::NotHermitian, "realify requires a Hermitian polynomial");
    const int n = p.n;

    using Accum = std::map<Exponents, Complex>;
    Accum total;

    // Multiplies acc by (re_var + sign * i * im_var).
    const auto mul_binomial = [](const Accum& acc, int re_var, int im_var, double sign) {
        Accum out;
        for (const auto& [e, c] : acc) {
            Exponents er = e;
            er[re_var] += 1;
            out[er] += c;
            Exponents ei = e;
            ei[im_var] += 1;
            out[ei] += c * Complex(0.0, sign);
        }
        return out;
    };

    for (const auto& [e, c] : p.terms) {
        Accum acc;
        acc.emplace(Exponents(4 * n, 0), c);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < e[i]; ++k) acc = mul_binomial(acc, i, n + i, +1.0);         // x
            for (int k = 0; k < e[n + i]; ++k) acc = mul_binomial(acc, i, n + i, -1.0);     // xbar
            for (int k = 0; k < e[2 * n + i]; ++k)
                acc = mul_binomial(acc, 2 * n + i, 3 * n + i, +1.0);                        // y
            for (int k = 0; k < e[3 * n + i]; ++k)
                acc = mul_binomial(acc, 2 * n + i, 3 * n + i, -1.0);                        // ybar
        }
        for (const auto& [re, rc] : acc) total[re] += rc;
    }

    RealPolynomial out;
    out.k = 4 * n;
    for (const auto& [e, c] : total) {
        if (std::abs(c.imag()) > 1e-10)
            fail(ErrorCode::NotHermitian, "realified polynomial has an imaginary residue");
        add_term(out, e, c.real());
    }
    return out;
}

double eval_real(const RealPolynomial& p, const Eigen::VectorXd& point) {
    check_dim(static_cast<int>(point.size()), p.k, "eval_real point");
    double sum = 0.0;
    for (const auto& [e, c] : p.terms) {
        double v = c;
        for (int i = 0; i < p.k; ++i)
            if (e[i]) v *= pow_int(point(i), e[i]);
        sum += v;
    }
    return sum;
}

Eigen::VectorXd embed_real(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    if (x.size() != y.size()) fail(ErrorCode::DimensionMismatch, "embed_real: |x| != |y|");
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd p(4 * n);
    p.segment(0, n) = x.real();
    p.segment(n, n) = x.imag();
    p.segment(2 * n, n) = y.real();
    p.segment(3 * n, n) = y.imag();
    return p;
}

double eval_cost(CostConvention conv, const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    if (u.size() != v.size()) fail(ErrorCode::DimensionMismatch, "eval_cost: |u| != |v|");
    const Complex sx2 = (u.array() * u.array()).sum();
    const Complex sy2 = (v.array() * v.array()).sum();
    if (conv == CostConvention::PaperConjugate) {
        const Complex sxy = (u.array() * v.array()).sum();
        return std::norm(sx2) + std::norm(sy2) - 2.0 * std::norm(sxy);
    }
    const double nx2 = u.squaredNorm();
    const double ny2 = v.squaredNorm();
    const Complex inner = u.dot(v); // conjugates u
    return nx2 * nx2 + ny2 * ny2 - 2.0 * std::norm(inner);
}

} // namespace qwb
