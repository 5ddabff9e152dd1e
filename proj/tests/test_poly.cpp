#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qwb/poly.hpp"
#include "qwb/rng.hpp"

using namespace qwb;

namespace {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

Exponents mono(int n, std::initializer_list<std::pair<int, int>> vars) {
    Exponents e(4 * n, 0);
    for (auto [v, k] : vars) e[v] = static_cast<std::uint8_t>(k);
    return e;
}

CVector unit_from(Rng& rng, int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
    return v / v.norm();
}

ComplexPolynomial random_poly(Rng& rng, int n, int terms) {
    ComplexPolynomial p;
    p.n = n;
    for (int t = 0; t < terms; ++t) {
        Exponents e(4 * n, 0);
        for (int v = 0; v < 4 * n; ++v) e[v] = rng.next_u64() % 3;
        add_term(p, e, {rng.normal(), rng.normal()});
    }
    return p;
}

} // namespace

TEST_CASE("conjugate on simple monomials") {
    const int n = 2;
    // 2i x_1 -> -2i xbar_1
    ComplexPolynomial p;
    p.n = n;
    add_term(p, mono(n, {{0, 1}}), Complex(0, 2));
    const ComplexPolynomial q = conjugate(p);
    REQUIRE(q.terms.size() == 1);
    CHECK(q.terms.begin()->first == mono(n, {{n + 0, 1}}));
    CHECK(q.terms.begin()->second == Complex(0, -2));

    // x_1 xbar_1 is a fixed point
    ComplexPolynomial herm;
    herm.n = n;
    add_term(herm, mono(n, {{0, 1}, {n + 0, 1}}), 1.0);
    CHECK(conjugate(herm).terms == herm.terms);

    // (1+i) x_1 y_2 -> (1-i) xbar_1 ybar_2
    ComplexPolynomial r;
    r.n = n;
    add_term(r, mono(n, {{0, 1}, {2 * n + 1, 1}}), Complex(1, 1));
    const ComplexPolynomial rc = conjugate(r);
    REQUIRE(rc.terms.size() == 1);
    CHECK(rc.terms.begin()->first == mono(n, {{n + 0, 1}, {3 * n + 1, 1}}));
    CHECK(rc.terms.begin()->second == Complex(1, -1));
}

TEST_CASE("conjugate is an involution") {
    Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const ComplexPolynomial p = random_poly(rng, 2, 6);
        const ComplexPolynomial q = conjugate(conjugate(p));
        CHECK(q.terms == p.terms);
    }
}

TEST_CASE("is_hermitian") {
    const int n = 2;
    CHECK(is_hermitian(cost_complex(CostConvention::PaperConjugate, n), 1e-14));
    CHECK(is_hermitian(cost_complex(CostConvention::ProjectorFrobenius, n), 1e-14));

    ComplexPolynomial x1;
    x1.n = n;
    add_term(x1, mono(n, {{0, 1}}), 1.0);
    CHECK_FALSE(is_hermitian(x1, 1e-14));

    ComplexPolynomial h;
    h.n = n;
    add_term(h, mono(n, {{0, 1}, {n + 0, 1}}), 1.0);
    add_term(h, mono(n, {{2 * n + 0, 1}, {3 * n + 0, 1}}), 1.0);
    CHECK(is_hermitian(h, 1e-14));
}

TEST_CASE("cost evaluations at the reference points") {
    const int n = 2;
    const ComplexPolynomial paper = cost_complex(CostConvention::PaperConjugate, n);
    const ComplexPolynomial frob = cost_complex(CostConvention::ProjectorFrobenius, n);
    CHECK(paper.degree() == 4);
    CHECK(frob.degree() == 4);

    CVector e1(2), plus(2), minus(2), xi(2), yi(2);
    e1 << 1, 0;
    plus << M_SQRT1_2, M_SQRT1_2;
    minus << M_SQRT1_2, -M_SQRT1_2;
    xi << M_SQRT1_2, Complex(0, M_SQRT1_2);
    yi << M_SQRT1_2, Complex(0, -M_SQRT1_2);

    CHECK(eval_complex(paper, e1, plus).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eval_complex(paper, e1, e1).real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eval_complex(frob, plus, plus).real() == doctest::Approx(0.0).epsilon(1e-12));

    // Complex point where the conventions split.
    CHECK(eval_complex(paper, xi, yi).real() == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(eval_complex(frob, xi, yi).real() == doctest::Approx(2.0).epsilon(1e-12));

    // Saturating real point.
    CHECK(eval_complex(paper, minus, plus).real() == doctest::Approx(2.0).epsilon(1e-12));

    // eval_cost agrees with the polynomial evaluation.
    CHECK(eval_cost(CostConvention::PaperConjugate, xi, yi) == doctest::Approx(-2.0));
    CHECK(eval_cost(CostConvention::ProjectorFrobenius, xi, yi) == doctest::Approx(2.0));
}

TEST_CASE("eval_complex basics and dimension checks") {
    const int n = 2;
    ComplexPolynomial p;
    p.n = n;
    add_term(p, mono(n, {{0, 1}, {n + 0, 1}}), 1.0); // x_1 xbar_1
    CVector e1(2);
    e1 << 1, 0;
    CHECK(eval_complex(p, e1, e1).real() == doctest::Approx(1.0));

    CVector bad(3);
    bad.setZero();
    CHECK_THROWS_AS(eval_complex(p, bad, e1), Error);
}

TEST_CASE("realify of x_1 xbar_1 is a_1^2 + b_1^2") {
    const int n = 2;
    ComplexPolynomial p;
    p.n = n;
    add_term(p, mono(n, {{0, 1}, {n + 0, 1}}), 1.0);
    const RealPolynomial r = realify(p);
    REQUIRE(r.terms.size() == 2);
    Exponents a1sq(4 * n, 0), b1sq(4 * n, 0);
    a1sq[0] = 2;
    b1sq[n + 0] = 2;
    CHECK(r.terms.at(a1sq) == doctest::Approx(1.0));
    CHECK(r.terms.at(b1sq) == doctest::Approx(1.0));
}

TEST_CASE("realify reproduces the imaginary-part sign pattern") {
    // i (xbar_1 x_2 - x_1 xbar_2) = 2 (b_1 a_2 - a_1 b_2)
    const int n = 2;
    ComplexPolynomial p;
    p.n = n;
    add_term(p, mono(n, {{n + 0, 1}, {1, 1}}), Complex(0, 1));
    add_term(p, mono(n, {{0, 1}, {n + 1, 1}}), Complex(0, -1));
    REQUIRE(is_hermitian(p, 1e-14));
    const RealPolynomial r = realify(p);
    Exponents b1a2(4 * n, 0), a1b2(4 * n, 0);
    b1a2[n + 0] = 1;
    b1a2[1] = 1;
    a1b2[0] = 1;
    a1b2[n + 1] = 1;
    CHECK(r.terms.at(b1a2) == doctest::Approx(2.0));
    CHECK(r.terms.at(a1b2) == doctest::Approx(-2.0));
}

TEST_CASE("realify rejects non-Hermitian input") {
    ComplexPolynomial p;
    p.n = 1;
    add_term(p, mono(1, {{0, 1}}), 1.0);
    CHECK_THROWS_AS(realify(p), Error);
}

TEST_CASE("realified costs match complex evaluation on samples") {
    Rng rng(5);
    for (auto conv : {CostConvention::PaperConjugate, CostConvention::ProjectorFrobenius}) {
        for (int n : {1, 2, 3}) {
            const ComplexPolynomial f = cost_complex(conv, n);
            const RealPolynomial fr = realify(f);
            CHECK(fr.degree() == 4);
            for (int trial = 0; trial < 200 / n; ++trial) {
                const CVector x = unit_from(rng, n);
                const CVector y = unit_from(rng, n);
                const Complex c = eval_complex(f, x, y);
                CHECK(std::abs(c.imag()) < 1e-12);
                const double r = eval_real(fr, embed_real(x, y));
                CHECK(std::abs(c.real() - r) < 1e-10);
            }
        }
    }
}

TEST_CASE("eval_real basics") {
    const int n = 2;
    const RealPolynomial r = realify([&] {
        ComplexPolynomial p;
        p.n = n;
        add_term(p, mono(n, {{0, 1}, {n + 0, 1}}), 1.0);
        return p;
    }());
    Eigen::VectorXd point = Eigen::VectorXd::Zero(4 * n);
    point(0) = 1.0; // a = e1
    CHECK(eval_real(r, point) == doctest::Approx(1.0));

    RealPolynomial zero;
    zero.k = 4 * n;
    CHECK(eval_real(zero, point) == 0.0);

    // Saturating point for the realified paper cost.
    const RealPolynomial fr = realify(cost_complex(CostConvention::PaperConjugate, n));
    CVector minus(2), plus(2);
    minus << M_SQRT1_2, -M_SQRT1_2;
    plus << M_SQRT1_2, M_SQRT1_2;
    CHECK(eval_real(fr, embed_real(minus, plus)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("conventions agree at real points") {
    Rng rng(17);
    const int n = 2;
    const ComplexPolynomial paper = cost_complex(CostConvention::PaperConjugate, n);
    const ComplexPolynomial frob = cost_complex(CostConvention::ProjectorFrobenius, n);
    for (int trial = 0; trial < 200; ++trial) {
        CVector x(n), y(n);
        for (int i = 0; i < n; ++i) x(i) = rng.normal();
        for (int i = 0; i < n; ++i) y(i) = rng.normal();
        x /= x.norm();
        y /= y.norm();
        const double a = eval_complex(paper, x, y).real();
        const double b = eval_complex(frob, x, y).real();
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("frobenius cost equals 2 - 2 |<x,y>|^2 on unit vectors") {
    Rng rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 2;
        const CVector x = unit_from(rng, n);
        const CVector y = unit_from(rng, n);
        const double f = eval_cost(CostConvention::ProjectorFrobenius, x, y);
        const double overlap = std::norm(x.dot(y));
        CHECK(std::abs(f - (2.0 - 2.0 * overlap)) < 1e-12);
    }
}

TEST_CASE("paper cost is bounded by 2 on the bi-sphere") {
    Rng rng(31);
    const int n = 2;
    double worst = -1e300;
    for (int trial = 0; trial < 10000; ++trial) {
        const CVector x = unit_from(rng, n);
        const CVector y = unit_from(rng, n);
        worst = std::max(worst, eval_cost(CostConvention::PaperConjugate, x, y));
    }
    CHECK(worst <= 2.0 + 1e-12);
}
