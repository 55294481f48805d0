#include "doctest.h"
#include "exotic/mks.hpp"

using namespace exo;

namespace {

const FieldTower& T2() {
    static FieldTower T(2, 1, 12);
    return T;
}
const FieldTower& T3() {
    static FieldTower T(3, 1, std::vector<int>{4, 5, 6, 12});
    return T;
}

bool close(cplx a, cplx b, double tol = 1e-7) { return std::abs(a - b) < tol; }

double sgn(int e) { return e % 2 ? -1.0 : 1.0; }

std::vector<CompositeChar> grid(const FieldTower& T) {
    // regular and non-regular components, lambda in (1), (2), (1,1), (3), (2,1)
    std::vector<CompositeChar> out;
    for (int64_t j = 0; j < T.units(1); ++j) out.push_back({{1}, {MultChar{1, j}}});
    out.push_back({{2}, {MultChar{2, 1}}});
    out.push_back({{2}, {MultChar{2, 0}}});
    out.push_back({{1, 1}, {MultChar{1, 0}, MultChar{1, T.units(1) - 1}}});
    out.push_back({{3}, {MultChar{3, 1}}});
    out.push_back({{2, 1}, {MultChar{2, 1}, MultChar{1, 0}}});
    return out;
}

}  // namespace

TEST_CASE("k = 1 sums are the closed form chi(det h) psi(tr h)") {
    for (auto* T : {&T2(), &T3()})
        for (int64_t j = 0; j < T->units(1); ++j) {
            MultChar chi{1, j};
            for (auto& h : class_table(*T, 2).classes)
                CHECK(close(mks_bruteforce(*T, chi, h, default_budget()),
                            eval_mult(*T, chi, class_det(*T, h)) * psi(*T, class_trace(*T, h))));
        }
}

TEST_CASE("c = 1 sums are exotic Kloosterman sums") {
    for (auto* T : {&T2(), &T3()})
        for (int k = 1; k <= 3; ++k)
            for (int64_t j = 0; j < T->units(k); j += 1 + T->units(k) / 4) {
                MultChar chi{k, j};
                CompositeChar a{{k}, {chi}};
                for (auto& h : class_table(*T, 1).classes) {
                    Elem xi = orbit_element(*T, h.blocks[0].orbit);
                    auto brute = mks_bruteforce(*T, chi, h, default_budget());
                    CHECK(close(brute, kloosterman(*T, a, 1, 1, xi)));
                    CHECK(close(brute, mks_hl(*T, a, h)));
                }
            }
}

TEST_CASE("Hall-Littlewood path agrees with convolution on GL_2") {
    for (auto* T : {&T2(), &T3()})
        for (auto& a : grid(*T)) {
            auto conv = mks_convolve_function(*T, a, 2, default_budget());
            auto hl = mks_hl_function(*T, a, 2);
            const double tol = 1e-6 * mks_scale(T->q(), a.k(), 2);
            for (size_t i = 0; i < conv.v.size(); ++i) CHECK(close(conv.v[i], hl.v[i], tol));
        }
}

TEST_CASE("Hall-Littlewood path agrees with brute force on GL_3(F_2)") {
    auto& T = T2();
    for (auto& a : {CompositeChar{{1}, {MultChar{1, 0}}}, CompositeChar{{2}, {MultChar{2, 1}}},
                    CompositeChar{{2}, {MultChar{2, 0}}}}) {
        auto brute = mks_bruteforce_function(T, a.alpha[0], 3, default_budget());
        auto hl = mks_hl_function(T, a, 3);
        for (size_t i = 0; i < brute.v.size(); ++i) CHECK(close(brute.v[i], hl.v[i], 1e-6 * mks_scale(2, a.k(), 3)));
    }
}

TEST_CASE("definitional characterization through Kondo scalars") {
    for (auto* T : {&T2(), &T3()})
        for (auto& a : grid(*T)) {
            if (a.k() == 3 && T->q() == 3) continue;
            auto K = mks_convolve_function(*T, a, 2, default_budget());
            for (auto& pi : enumerate_parameters(*T, 2)) {
                auto& chi = character_of(*T, pi);
                cplx s = 0;
                for (size_t i = 0; i < K.v.size(); ++i) s += double(K.table->sizes[i]) * K.v[i] * chi.v[i];
                s *= std::pow(double(T->q()), -0.5 * a.k() * 4);
                cplx g = 1;
                for (auto& x : a.alpha) g *= kondo_scalar(*T, pi, x, default_budget());
                CHECK(close(s, double(character_dimension(*T, pi)) * g, 1e-6));
                CHECK(close(g, kondo_exotic_closed(*T, pi, a), 1e-6));
            }
        }
}

TEST_CASE("reduction of non-regular characters") {
    auto& T2_ = T2();
    auto r1 = mks_reduce_nonregular(T2_, MultChar{2, 0}, MultChar{1, 0}, 1, default_budget());
    CHECK(r1.max_err < 1e-8);
    auto& T3_ = T3();
    for (int64_t j = 0; j < 2; ++j) {
        MultChar base{1, j};
        auto r2 = mks_reduce_nonregular(T3_, inflate(T3_, base, 2), base, 2, default_budget());
        CHECK(r2.max_err < 1e-8);
    }
    auto r3 = mks_reduce_nonregular(T2_, MultChar{3, 0}, MultChar{1, 0}, 2, default_budget());
    CHECK(r3.max_err < 1e-8);
    CHECK_THROWS(mks_reduce_nonregular(T2_, MultChar{2, 1}, MultChar{1, 0}, 1, default_budget()));

    int e = 0;
    auto red = regular_reduction(T3_, CompositeChar{{2}, {inflate(T3_, MultChar{1, 1}, 2)}}, &e);
    CHECK(e == 1);
    CHECK(red.lambda == std::vector<int>{1, 1});
}

TEST_CASE("Bessel-Speh special values are exotic matrix Kloosterman sums") {
    struct Case {
        const FieldTower* T;
        CompositeChar alpha;
        int c;
    };
    std::vector<Case> cases = {
        {&T2(), {{2}, {MultChar{2, 1}}}, 1}, {&T2(), {{2}, {MultChar{2, 1}}}, 2},
        {&T2(), {{3}, {MultChar{3, 1}}}, 1}, {&T3(), {{2}, {MultChar{2, 1}}}, 1},
        {&T3(), {{1, 1}, {MultChar{1, 0}, MultChar{1, 1}}}, 1}, {&T3(), {{1}, {MultChar{1, 1}}}, 2},
        {&T3(), {{1, 1}, {MultChar{1, 0}, MultChar{1, 1}}}, 2},
    };
    for (auto& [T, alpha, c] : cases) {
        const int k = alpha.k(), s = alpha.s();
        auto& B = bessel_speh_function(*T, alpha, c);
        auto inv = composite_inverse(*T, alpha);
        for (size_t i = 0; i < B.v.size(); ++i) {
            auto h = class_representative(*T, B.table->classes[i]);
            auto g = mat_inv(*T, h);
            if ((k - 1) % 2) g = mat_neg(*T, g);
            cplx bstar = B.v[i] * std::pow(double(T->q()), 0.5 * (k - 1) * c * c);
            cplx kstar = mks_normalized(*T, inv, identify_class(*T, g), MksPath::hl, default_budget());
            CHECK(close(bstar, sgn((k + s) * c) * kstar, 1e-6));
        }
    }
}

TEST_CASE("multiplicativity in the class") {
    for (auto* T : {&T2(), &T3()})
        for (auto& a : {CompositeChar{{2}, {MultChar{2, 1}}}, CompositeChar{{1}, {MultChar{1, 0}}}}) {
            const int k = a.k();
            auto K2 = mks_hl_function(*T, a, 2);
            auto K1 = mks_hl_function(*T, a, 1);
            auto& c1 = class_table(*T, 1).classes;
            for (auto& x : c1)
                for (auto& y : c1) {
                    auto h1 = class_representative(*T, x), h2 = class_representative(*T, y);
                    auto avg = block_unipotent_average(*T, K2, h1, h2);
                    // normalized sums: the average factors
                    cplx lhs = avg / mks_scale(T->q(), k, 2);
                    cplx rhs = K1(x) * K1(y) / (mks_scale(T->q(), k, 1) * mks_scale(T->q(), k, 1));
                    CHECK(close(lhs, rhs, 1e-6));
                    if (x != y) {
                        auto d = K2.at(*T, block_diag(*T, {h1, h2}));
                        CHECK(close(d, std::pow(double(T->q()), k - 1) * K1(x) * K1(y), 1e-6 * mks_scale(T->q(), k, 2)));
                    }
                }
        }
}

TEST_CASE("Bessel-Speh multiplicativity in the class") {
    auto& T = T3();
    CompositeChar a{{1, 1}, {MultChar{1, 0}, MultChar{1, 1}}};
    auto& B2 = bessel_speh_function(T, a, 2);
    auto& B1 = bessel_speh_function(T, a, 1);
    for (auto& x : class_table(T, 1).classes)
        for (auto& y : class_table(T, 1).classes) {
            auto h1 = class_representative(T, x), h2 = class_representative(T, y);
            CHECK(close(block_unipotent_average(T, B2, h1, h2), std::pow(3.0, -1.0) * B1(x) * B1(y)));
        }
}

TEST_CASE("Whittaker transform of the special values") {
    for (auto* T : {&T2(), &T3()}) {
        CompositeChar a = T->q() == 2 ? CompositeChar{{2}, {MultChar{2, 1}}} : CompositeChar{{1}, {MultChar{1, 1}}};
        const int k = a.k(), c = 2;
        auto& B = bessel_speh_function(*T, a, c);
        for (auto& cl : class_table(*T, c).classes) {
            auto h = class_representative(*T, cl);
            cplx s = 0;
            for (int64_t x = 0; x < T->q(); ++x) {
                MatrixGL u = identity_matrix(*T, 2, 1);
                u(0, 1) = T->from_code(1, x);
                s += B.at(*T, mat_mul(*T, h, u)) * std::conj(psi(*T, u(0, 1)));
            }
            CHECK(close(f_transform(*T, a, h), std::pow(double(T->q()), k - 1) * s, 1e-7));
        }
    }
}

TEST_CASE("global function truncations") {
    auto& T = T2();
    for (auto& a : {CompositeChar{{1, 1}, {MultChar{1, 0}, MultChar{1, 0}}}, CompositeChar{{2}, {MultChar{2, 1}}},
                    CompositeChar{{1}, {MultChar{1, 0}}}})
        for (int n = 1; n <= 2; ++n) {
            auto g = global_truncation(T, a, n);
            CHECK(g.err < 1e-5);
            CHECK(g.err_hat < 1e-5);
        }
    auto g1 = global_truncation(T, CompositeChar{{1, 1}, {MultChar{1, 0}, MultChar{1, 0}}}, 1);
    CHECK(g1.euler.coeffs.size() == 1);
    auto& T_ = T3();
    auto g3 = global_truncation(T_, CompositeChar{{2}, {MultChar{2, 1}}}, 2);
    CHECK(g3.err < 1e-5);
    CHECK(g3.err_hat < 1e-5);
    auto g0 = global_truncation(T, CompositeChar{{1}, {MultChar{1, 0}}}, 0);
    CHECK(close(g0.euler.coeff(ClassLabel{}), 1.0));
}

TEST_CASE("zero-cycle sums") {
    for (auto* T : {&T2(), &T3()}) {
        CompositeChar a{{3}, {MultChar{3, 1}}};
        for (int64_t i = 0; i < T->units(1); ++i)
            for (int64_t j = 0; j < T->units(1); ++j) {
                Elem t1 = T->from_log(1, i), t2 = T->from_log(1, j);
                CHECK(close(zero_cycle_bessel(*T, a, 2, t1, t2), zero_cycle_sum(*T, a, 2, t1, t2), 1e-6));
            }
        // each fiber of det on regular classes of GL_2 has q - 1 + ... elements: total is the
        // number of monic degree-2 polynomials with that constant term, q per fiber
        for (int64_t i = 0; i < T->units(1); ++i)
            CHECK(zero_cycle_count(*T, 2, T->from_log(1, i)) == T->q());
    }
}

TEST_CASE("bounds on normalized sums") {
    for (auto* T : {&T2(), &T3()})
        for (auto& a : grid(*T)) {
            if (T->q() == 3 && a.k() == 3) continue;
            for (int c = 1; c <= 2; ++c)
                for (auto& h : class_table(*T, c).classes) {
                    double v = std::abs(mks_normalized(*T, a, h, MksPath::hl, default_budget()));
                    CHECK(v <= mks_flag_bound(*T, a.k(), h) + 1e-9);
                    bool regular = true;
                    for (auto& b : h.blocks) regular = regular && b.mu.size() == 1;
                    if (regular) CHECK(mks_flag_bound(*T, a.k(), h) == doctest::Approx(mks_regular_bound(a.k(), h)));
                }
        }
}

TEST_CASE("generating series identity") {
    for (auto* T : {&T2(), &T3()})
        for (auto& a : {CompositeChar{{2}, {MultChar{2, 1}}}, CompositeChar{{1, 1}, {MultChar{1, 0}, MultChar{1, 1}}},
                        CompositeChar{{3}, {MultChar{3, 1}}}}) {
            if (T->q() == 2 && a.s() == 2) continue;  // needs two distinct characters of F_2^x
            const int k = a.k(), s = a.s();
            const double q = double(T->q());
            auto tau = generic_parameter(*T, a);
            auto inv = composite_inverse(*T, a);
            for (int64_t t = 0; t < T->units(1); ++t) {
                Elem x = T->from_log(1, t);
                std::vector<cplx> lhs(5, 0.0);
                for (int r = 0; r <= k; ++r) {
                    MatrixGL g = zero_matrix(*T, k, 1);
                    for (int i = 0; i < k - r; ++i) g(i, r + i) = T->one(1);
                    for (int i = 0; i < r; ++i) g(k - r + i, i) = x;
                    lhs[r] = std::pow(q, 0.5 * r * (k - r)) * bessel(*T, tau, g);
                }
                // invert the polynomial as a power series to T^4
                std::vector<cplx> inv_series(5, 0.0);
                inv_series[0] = 1.0 / lhs[0];
                for (int n = 1; n <= 4; ++n) {
                    cplx acc = 0;
                    for (int i = 1; i <= n; ++i) acc += lhs[i] * inv_series[n - i];
                    inv_series[n] = -acc / lhs[0];
                }
                Elem y = T->inv(x);
                if ((k - 1) % 2) y = T->neg(y);
                auto L = lpolynomial(*T, inv, 1, y, 4);
                std::vector<cplx> Linv(5, 0.0);
                Linv[0] = 1.0;
                for (int n = 1; n <= 4; ++n) {
                    cplx acc = 0;
                    for (int i = 1; i <= n && i < int(L.coeffs.size()); ++i) acc += L.coeffs[i] * Linv[n - i];
                    Linv[n] = -acc;
                }
                for (int r = 1; r <= 4; ++r) {
                    // (-1)^r B*_tau(J_(r)(x)), with B* from the Kloosterman side
                    ClassLabel jr{{{orbit_of(*T, y), {r}}}};
                    cplx rhs = sgn(r) * sgn((k + s) * r) * mks_normalized(*T, inv, jr, MksPath::hl, default_budget());
                    CHECK(close(inv_series[r], rhs, 1e-6));
                    CHECK(close(Linv[r] * sgn(s * r), rhs, 1e-6));
                }
            }
        }
}
