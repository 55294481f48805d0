#include "doctest.h"
#include "exotic/chars.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace exo;

namespace {

// Gauss sum straight from the definition, element by element.
cplx naive_gauss(const FieldTower& T, const MultChar& chi) {
    cplx s = 0;
    for (int64_t t = 0; t < T.units(chi.level); ++t) {
        Elem x = T.from_log(chi.level, t);
        s += eval_mult(T, chi, x) * psi(T, x);
    }
    return -s;
}

cplx zeta(int r, int n) { return std::polar(1.0, 2 * std::numbers::pi * r / n); }

}  // namespace

TEST_CASE("multiplicative characters") {
    FieldTower T(3, 1, 2);
    MultChar quad{1, 1};
    CHECK(std::abs(eval_mult(T, quad, T.from_int(1, 2)) - cplx(-1)) < 1e-12);
    CHECK(std::abs(eval_mult(T, {1, 0}, T.from_int(1, 2)) - cplx(1)) < 1e-12);
    MultChar chi{2, 3};
    CHECK(std::abs(eval_mult(T, chi, T.gen(2)) - zeta(3, 8)) < 1e-12);
    for (int64_t a = 0; a < 8; ++a)
        for (int64_t b = 0; b < 8; ++b) {
            Elem x = T.from_log(2, a), y = T.from_log(2, b);
            CHECK(std::abs(eval_mult(T, chi, T.mul(x, y)) - eval_mult(T, chi, x) * eval_mult(T, chi, y)) < 1e-12);
        }
    CHECK_THROWS(eval_mult(T, chi, T.zero(2)));
}

TEST_CASE("orbits, degrees, inflation") {
    FieldTower T2(2, 1, 2);
    auto o = frobenius_orbit(T2, {2, 1});
    REQUIRE(o.size() == 2);
    CHECK(o[0].j == 1);
    CHECK(o[1].j == 2);
    CHECK(char_degree(T2, {2, 0}) == 1);
    CHECK(is_regular(T2, {2, 1}));
    CHECK(!is_regular(T2, {2, 0}));

    FieldTower T(3, 1, 4);
    CHECK(inflate(T, {1, 1}, 2).j == 4);
    CHECK(inflate(T, {1, 0}, 2).j == 0);
    // pointwise against the norm
    for (int m : {1, 2})
        for (int b : {1, 2, 4}) {
            if (m * b > 4) continue;
            for (int64_t j = 0; j < T.units(m); ++j) {
                MultChar chi{m, j}, up = inflate(T, chi, m * b);
                for (int64_t t = 0; t < T.units(m * b); ++t) {
                    Elem x = T.from_log(m * b, t);
                    CHECK(std::abs(eval_mult(T, up, x) - eval_mult(T, chi, T.norm(x, m))) < 1e-9);
                }
                CHECK(restrict_to_degree(T, up).level == char_degree(T, chi));
            }
        }
    // degree of j at level 4, q = 3: j = 10 = 80/8 factors through F_9
    CHECK(char_degree(T, {4, 10}) == 2);
    CHECK(orbit_label(T, {4, 30}) == 10);
    CHECK(parse_char("2:5") == MultChar{2, 5});
    CHECK(format_char({3, 7}) == "3:7");
    CHECK_THROWS(parse_char("25"));
}

TEST_CASE("Gauss sum examples") {
    FieldTower T3(3, 1, 1);
    CHECK(std::abs(gauss_sum(T3, {1, 0}) - cplx(1)) < 1e-12);
    cplx expect = -(zeta(1, 3) - zeta(2, 3));
    CHECK(std::abs(gauss_sum(T3, {1, 1}) - expect) < 1e-12);
    FieldTower T2(2, 1, 2);
    CHECK(std::abs(std::abs(gauss_sum(T2, {2, 1})) - 2.0) < 1e-12);
}

TEST_CASE("Gauss table agrees with the definition and is Frobenius invariant") {
    for (auto [p, f, M] : std::vector<std::array<int, 3>>{{2, 1, 4}, {3, 1, 3}, {2, 2, 2}, {5, 1, 2}}) {
        FieldTower T(p, f, M);
        for (int m = 1; m <= M; ++m) {
            const auto& G = gauss_table(T, m);
            for (int64_t j = 0; j < T.units(m); ++j) {
                MultChar chi{m, j};
                cplx g = naive_gauss(T, chi);
                CHECK(std::abs(G[j] - g) < 1e-9);
                CHECK(std::abs(gauss_sum(T, chi) - g) < 1e-9);
                CHECK(std::abs(G[char_frob(T, chi, 1).j] - g) < 1e-9);
            }
        }
    }
}

TEST_CASE("Gauss modulus and Hasse-Davenport") {
    for (auto [p, f] : std::vector<std::array<int, 2>>{{2, 1}, {3, 1}, {2, 2}}) {
        FieldTower T(p, f, 6);
        const double q = double(T.q());
        for (int m = 1; m <= 3; ++m) {
            const auto& G = gauss_table(T, m);
            for (int64_t j = 0; j < T.units(m); ++j) {
                double expect = j == 0 ? 1.0 : std::pow(q, m / 2.0);
                CHECK(std::abs(std::abs(G[j]) - expect) < 1e-9);
                const auto& G2 = gauss_table(T, 2 * m);
                cplx up = G2[inflate(T, {m, j}, 2 * m).j];
                CHECK(std::abs(G[j] * G[j] - up) < 1e-8 * std::max(1.0, std::abs(up)));
            }
        }
    }
}
