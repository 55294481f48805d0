#include "doctest.h"
#include "exotic/expsums.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace exo;

namespace {

cplx zeta(int r, int n) { return std::polar(1.0, 2 * std::numbers::pi * r / n); }

bool close(cplx a, cplx b, double tol = 1e-6) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// Kl_m(alpha, psi, xi) for lambda = (1,...,1) straight from the twisted Kloosterman formula
cplx naive_twisted_kl(const FieldTower& T, const std::vector<MultChar>& alpha, int m, const Elem& xi) {
    const int k = int(alpha.size());
    const int64_t N = T.units(m);
    cplx s = 0;
    std::vector<int64_t> t(k - 1, 0);
    while (true) {
        Elem prod = T.one(m), sum = T.zero(m);
        cplx a = 1;
        for (int i = 0; i < k - 1; ++i) {
            Elem x = T.from_log(m, t[i]);
            prod = T.mul(prod, x);
            sum = T.add(sum, x);
            a *= eval_mult(T, alpha[i], T.norm(x, 1));
        }
        Elem last = T.div(xi, prod);
        sum = T.add(sum, last);
        a *= eval_mult(T, alpha[k - 1], T.norm(last, 1));
        s += a * psi(T, sum);
        int i = 0;
        for (; i < k - 1; ++i) {
            if (++t[i] < N) break;
            t[i] = 0;
        }
        if (i == k - 1) break;
    }
    return s;
}

}  // namespace

TEST_CASE("exotic Gauss sum examples") {
    FieldTower T(3, 1, 4);
    // k = m = 1 collapses to a classical Gauss sum
    for (int64_t a = 0; a < 2; ++a)
        for (int64_t c = 0; c < 2; ++c)
            CHECK(close(exotic_gauss(T, 1, 1, {1, a}, {1, c}), gauss_sum(T, {1, (a + c) % 2})));
    // k = 2, m = 1: twisted Gauss sum
    for (int64_t a = 0; a < 8; ++a)
        for (int64_t c = 0; c < 2; ++c) {
            cplx s = 0;
            for (int64_t t = 0; t < 8; ++t) {
                Elem x = T.from_log(2, t);
                s += eval_mult(T, {2, a}, x) * eval_mult(T, {1, c}, T.norm(x, 1)) * psi(T, x);
            }
            CHECK(close(exotic_gauss(T, 2, 1, {2, a}, {1, c}), -s));
        }
    FieldTower T2(2, 1, 2);
    CHECK(close(exotic_gauss(T2, 2, 2, {2, 0}, {2, 0}), exotic_gauss_product(T2, 2, 2, {2, 0}, {2, 0})));
}

TEST_CASE("exotic Gauss sums: defining sum equals product formula") {
    for (int p : {2, 3}) {
        FieldTower T(p, 1, 4);
        for (int k = 1; k <= 4; ++k)
            for (int m = 1; m <= 4; ++m) {
                if (lcm64(k, m) > 4) continue;
                UnitHistogram H(T, unit_layout(T, {k}, m), default_budget());
                const double sign = ((k + m + k * m) % 2) ? -1.0 : 1.0;
                for (int64_t a = 0; a < T.units(k); ++a)
                    for (int64_t c = 0; c < T.units(m); ++c) {
                        cplx direct = sign * H.pair(T, {{k, a}}, {m, c});
                        CHECK(close(direct, exotic_gauss_product(T, k, m, {k, a}, {m, c})));
                    }
            }
    }
}

TEST_CASE("composite exotic Gauss sums") {
    FieldTower T3(3, 1, 2);
    auto al = make_composite(T3, {1, 1}, {{1, 1}, {1, 0}});
    cplx expect = -(zeta(1, 3) - zeta(2, 3));
    CHECK(close(composite_exotic_gauss(T3, al, 1, {1, 0}), expect));

    FieldTower T2(2, 1, 4);
    for (int m = 1; m <= 2; ++m)
        for (int64_t a = 0; a < 3; ++a)
            for (int64_t c = 0; c < T2.units(m); ++c) {
                auto A = make_composite(T2, {2, 1}, {{2, a}, {1, 0}});
                CHECK(close(composite_exotic_gauss(T2, A, m, {m, c}), composite_exotic_gauss_direct(T2, A, m, {m, c})));
            }
    FieldTower T(3, 1, 2);
    auto A = make_composite(T, {2, 1}, {{2, 3}, {1, 1}});
    for (int64_t c = 0; c < 8; ++c)
        CHECK(close(composite_exotic_gauss(T, A, 2, {2, c}), composite_exotic_gauss_direct(T, A, 2, {2, c})));
}

TEST_CASE("Hasse-Davenport for exotic Gauss sums") {
    for (int p : {2, 3}) {
        FieldTower T(p, 1, 6);
        for (int k = 1; k <= 3; ++k)
            for (int m = 1; m <= 3; ++m)
                for (int b = 1; b <= 2; ++b) {
                    if (lcm64(b * k, m) > 6 || lcm64(k, b * m) > 6) continue;
                    for (int64_t a = 0; a < T.units(k); ++a)
                        for (int64_t c = 0; c < T.units(m); ++c) {
                            MultChar al{k, a}, ch{m, c};
                            cplx base = std::pow(exotic_gauss_product(T, k, m, al, ch), b);
                            CHECK(close(base, exotic_gauss_product(T, b * k, m, inflate(T, al, b * k), ch), 1e-6));
                            CHECK(close(base, exotic_gauss_product(T, k, b * m, al, inflate(T, ch, b * m)), 1e-6));
                        }
                }
        // composite version on lambda = (2,1)
        for (int64_t a = 0; a < T.units(2); ++a)
            for (int64_t c = 0; c < T.units(1); ++c) {
                auto A = make_composite(T, {2, 1}, {{2, a}, {1, 1 % T.units(1)}});
                MultChar ch{1, c};
                for (int b = 2; b <= 3; ++b)
                    CHECK(close(std::pow(composite_exotic_gauss(T, A, 1, ch), b),
                                composite_exotic_gauss(T, A, b, inflate(T, ch, b))));
            }
    }
}

TEST_CASE("Kloosterman sums: examples") {
    FieldTower T(3, 1, 6);
    // rank one: Kl_m(alpha, xi) = alpha(N xi) psi_m(xi)
    auto A1 = make_composite(T, {1}, {{1, 1}});
    for (int m = 1; m <= 3; ++m)
        for (int64_t t = 0; t < T.units(m); ++t) {
            Elem xi = T.from_log(m, t);
            CHECK(close(kloosterman(T, A1, 1, m, xi), eval_mult(T, {1, 1}, T.norm(xi, 1)) * psi(T, xi)));
        }
    FieldTower T2(2, 1, 2);
    auto triv2 = make_composite(T2, {1, 1}, {{1, 0}, {1, 0}});
    CHECK(close(kloosterman(T2, triv2, 1, 1, T2.one(1)), 1.0));
    // normalized classical Kloosterman sum at q = 3
    auto triv3 = make_composite(T, {1, 1}, {{1, 0}, {1, 0}});
    CHECK(close(kloosterman_normalized(T, triv3, 1, 1, T.one(1)), -1.0 / std::sqrt(3.0), 1e-12));
    // twisted Kloosterman sums
    for (int64_t a = 0; a < 2; ++a)
        for (int m = 1; m <= 2; ++m) {
            auto A = make_composite(T, {1, 1, 1}, {{1, a}, {1, 1}, {1, 0}});
            for (int64_t t = 0; t < T.units(m); ++t) {
                Elem xi = T.from_log(m, t);
                CHECK(close(kloosterman(T, A, 1, m, xi), naive_twisted_kl(T, A.alpha, m, xi)));
            }
        }
}

TEST_CASE("Kloosterman sums: Fourier path, brute force, base change") {
    for (int p : {2, 3}) {
        FieldTower T(p, 1, 6);
        std::vector<std::vector<int>> lambdas{{2}, {2, 1}, {3}, {1, 1}};
        for (auto& lam : lambdas)
            for (int a = 1; a <= 2; ++a)
                for (int m = 1; m * a <= 3; ++m) {
                    std::vector<MultChar> al;
                    for (int k : lam) al.push_back({k, 1 % T.units(k)});
                    auto A = make_composite(T, lam, al);
                    UnitHistogram plain(T, unit_layout(T, lam, a * m), default_budget());
                    for (int64_t t = 0; t < T.units(a * m); ++t) {
                        Elem xi = T.from_log(a * m, t);
                        cplx f = kloosterman(T, A, a, m, xi);
                        CHECK(close(f, plain.fiber(T, A.alpha, t)));
                        CHECK(close(f, kloosterman_brute(T, A, a, m, xi, default_budget())));
                        // constant on Frobenius orbits
                        CHECK(close(f, kloosterman(T, A, a, m, T.frobenius(xi, 1))));
                    }
                    // Gauss sum as the Mellin transform of Kl
                    const int k = A.k(), s = A.s(), M = a * m;
                    const double sign = ((k + s * M + M * k) % 2) ? -1.0 : 1.0;
                    for (int64_t c = 0; c < T.units(M); ++c) {
                        cplx acc = 0;
                        for (int64_t t = 0; t < T.units(M); ++t)
                            acc += plain.fiber(T, A.alpha, t) * eval_mult_log(T, {M, c}, t);
                        CHECK(close(sign * acc, composite_exotic_gauss(T, A, M, {M, c})));
                    }
                }
    }
}

TEST_CASE("L-polynomials") {
    FieldTower T(3, 1, 12);
    // k = 1
    auto A1 = make_composite(T, {1}, {{1, 1}});
    for (int64_t t = 0; t < 2; ++t) {
        Elem xi = T.from_log(1, t);
        auto L = lpolynomial(T, A1, 1, xi, 4);
        CHECK(close(L.coeffs[1], -eval_mult(T, {1, 1}, xi) * psi(T, xi)));
        for (int n = 2; n <= 4; ++n) CHECK(std::abs(L.series[n]) < 1e-9);
    }
    // classical Kloosterman at q = 3, xi = 1: roots from Kl_1, Kl_2
    auto triv = make_composite(T, {1, 1}, {{1, 0}, {1, 0}});
    Elem one = T.one(1);
    cplx k1 = naive_twisted_kl(T, triv.alpha, 1, one) / std::sqrt(3.0);
    cplx k2 = naive_twisted_kl(T, triv.alpha, 2, T.one(2)) / 3.0;
    cplx e1 = -k1, p2 = -k2, e2 = (e1 * e1 - p2) / 2.0;
    cplx disc = std::sqrt(e1 * e1 - 4.0 * e2);
    cplx r1 = (e1 + disc) / 2.0, r2 = (e1 - disc) / 2.0;
    auto L = lpolynomial(T, triv, 1, one, 5);
    REQUIRE(L.roots.size() == 2);
    bool match = (close(L.roots[0], r1) && close(L.roots[1], r2)) || (close(L.roots[0], r2) && close(L.roots[1], r1));
    CHECK(match);
    for (auto& w : L.roots) CHECK(std::abs(std::abs(w) - 1.0) < 1e-4);
    for (int n = 3; n <= 5; ++n) CHECK(std::abs(L.series[n]) < 1e-6);
    // unnormalized roots have modulus q^{a(k-1)/2}
    for (auto& w : kloosterman_roots(T, triv, 1, one)) CHECK(std::abs(std::abs(w) - std::sqrt(3.0)) < 1e-4);

    // lambda = (2), q = 2
    FieldTower T2(2, 1, lpolynomial_levels({2}, 1, 5));
    for (int64_t j = 0; j < 3; ++j) {
        auto A = make_composite(T2, {2}, {{2, j}});
        auto L2 = lpolynomial(T2, A, 1, T2.one(1), 5);
        CHECK(L2.coeffs.size() == 3);
        for (int n = 3; n <= 5; ++n) CHECK(std::abs(L2.series[n]) < 1e-6);
        // power sums of the roots reproduce the normalized sums
        for (int m = 1; m <= 5; ++m) {
            cplx ps = 0;
            for (auto& w : L2.roots) ps += std::pow(w, m);
            CHECK(close(ps, -kloosterman_normalized(T2, A, 1, m, T2.one(m))));
        }
    }
}

TEST_CASE("roots of a polynomial") {
    // (1 - 2T)(1 + 3T) = 1 + T - 6T^2
    auto r = roots_of({1.0, 1.0, -6.0});
    REQUIRE(r.size() == 2);
    double a = r[0].real(), b = r[1].real();
    if (a > b) std::swap(a, b);
    CHECK(a == doctest::Approx(-3.0));
    CHECK(b == doctest::Approx(2.0));
}
