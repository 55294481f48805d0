#include "exotic/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <array>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "exotic/etale.hpp"
#include "exotic/expsums.hpp"
#include "exotic/glq.hpp"
#include "exotic/mks.hpp"
#include "exotic/repth.hpp"
#include "exotic/symfunc.hpp"

namespace exo {

namespace {

double sgn(int64_t e) { return e % 2 ? -1.0 : 1.0; }

// ---------------------------------------------------------------------------------------
// Comparison accumulator.  Errors are divided by `scale` and by the per-comparison factor
// relative to the check tolerance, so a single abs_err/tol pair decides the report.
class Ctx {
public:
    Ctx(const Grid& g, int64_t budget, CheckReport& r) : grid(g), budget(budget), r_(r) {}

    const Grid& grid;
    const int64_t budget;

    const std::vector<int>& operator[](const std::string& key) const {
        auto it = grid.find(key);
        if (it == grid.end()) throw std::logic_error("grid has no entry " + key);
        return it->second;
    }
    int first(const std::string& key) const { return (*this)[key].at(0); }

    void cmp(cplx lhs, cplx rhs, const std::string& where, double scale = 1.0, double factor = 1.0) {
        r_.lhs.push_back(lhs);
        r_.rhs.push_back(rhs);
        note(std::abs(lhs - rhs) / std::max(scale, 1e-300) / factor, where);
    }
    // lhs <= rhs; the violation counts as the error
    void le(double lhs, double rhs, const std::string& where) {
        r_.lhs.push_back(lhs);
        r_.rhs.push_back(rhs);
        note(std::max(0.0, lhs - rhs), where);
    }
    void skip(const std::string& where, const std::string& why) { r_.skipped.push_back(where + ": " + why); }

    // runs fn, turning a budget overrun into a skipped grid point
    void guard(const std::string& where, const std::function<void()>& fn) {
        try {
            fn();
        } catch (const BudgetError& e) {
            std::ostringstream s;
            s.precision(12);
            s << "budget exceeded (cardinality " << e.cardinality << " > " << budget << ")";
            skip(where, s.str());
        }
    }

private:
    CheckReport& r_;
    void note(double e, const std::string& where) {
        if (std::isnan(e)) e = INFINITY;
        if (e > r_.abs_err || r_.worst.empty()) {
            r_.abs_err = e;
            r_.worst = where;
            r_.worst_index = r_.lhs.size() - 1;
        }
    }
};

std::string where(std::initializer_list<std::pair<const char*, std::string>> kv) {
    std::string s;
    for (auto& [k, v] : kv) {
        if (!s.empty()) s += ' ';
        s += k;
        s += '=';
        s += v;
    }
    return s;
}
std::string str(int64_t v) { return std::to_string(v); }
std::string str(const CompositeChar& a) {
    std::string s = "[";
    for (size_t i = 0; i < a.alpha.size(); ++i) s += (i ? "," : "") + format_char(a.alpha[i]);
    return s + "]";
}
std::string str(const std::vector<int>& la) {
    std::string s = "(";
    for (size_t i = 0; i < la.size(); ++i) s += (i ? "," : "") + std::to_string(la[i]);
    return s + ")";
}

// ---------------------------------------------------------------------------------------
// Shared parameter data.

const std::vector<std::vector<int>>& lambda_list() {
    static const std::vector<std::vector<int>> L = {{1}, {2}, {1, 1}, {3}, {2, 1}};
    return L;
}

std::vector<CompositeChar> lambdas_from(const Ctx& c, const FieldTower& T, bool regular_only, int per_component) {
    std::vector<CompositeChar> out;
    for (int li : c["lambda"]) {
        const auto& la = lambda_list().at(size_t(li));
        std::vector<std::vector<MultChar>> choices;
        for (int k : la) {
            std::vector<MultChar> v;
            const int64_t N = T.units(k);
            for (int64_t j = 0; j < N; ++j) {
                MultChar x{k, j};
                if (regular_only && !is_regular(T, x)) continue;
                v.push_back(x);
            }
            if (per_component > 0 && int(v.size()) > per_component) {
                std::vector<MultChar> s;
                for (int i = 0; i < per_component; ++i) s.push_back(v[size_t(i) * v.size() / per_component]);
                v = s;
            }
            choices.push_back(v);
        }
        std::vector<size_t> idx(la.size(), 0);
        bool empty = false;
        for (auto& v : choices) empty = empty || v.empty();
        if (empty) continue;
        while (true) {
            CompositeChar a;
            a.lambda = la;
            for (size_t i = 0; i < la.size(); ++i) a.alpha.push_back(choices[i][idx[i]]);
            out.push_back(a);
            size_t i = 0;
            while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
            if (i == idx.size()) break;
        }
    }
    return out;
}

// generic taus used by the Bessel-Speh checks, at most kc <= 4
std::vector<CompositeChar> tau_list(const FieldTower& T) {
    if (T.q() == 2) return {{{2}, {MultChar{2, 1}}}, {{1}, {MultChar{1, 0}}}};
    return {{{1}, {MultChar{1, 1}}}, {{2}, {MultChar{2, 1}}}, {{1, 1}, {MultChar{1, 0}, MultChar{1, 1}}}};
}

bool group_fits(const Ctx& c, const FieldTower& T, int n) {
    auto it = c.grid.find("max_order");
    return it == c.grid.end() || gl_cardinality(T.q(), n) <= double(it->second.at(0));
}

// deterministic test function on classes
ClassFunction sample_function(const FieldTower& T, int n, double seed) {
    int i = 0;
    return make_class_function(T, n, [&](const ClassLabel&) {
        ++i;
        return cplx(std::cos(seed * i + 0.3), std::sin(1.7 * seed * i) + 0.1 * i);
    });
}

double scale_of(cplx v) { return std::max(1.0, std::abs(v)); }

// H^_mu evaluated on explicit roots through the monomial expansion
cplx hhat_on_roots(const Partition& mu, int64_t Q, const std::vector<cplx>& x) {
    auto f = hl_modified(mu, int(x.size()), Rational(Q));
    return evaluate(f, x);
}

// complete homogeneous h_b on explicit values
cplx complete_on(int b, const std::vector<cplx>& x) {
    std::vector<cplx> h(size_t(b) + 1, 0.0);
    h[0] = 1.0;
    for (auto r : x)
        for (int n = 1; n <= b; ++n) h[n] += r * h[n - 1];
    return h[b];
}

// ---------------------------------------------------------------------------------------
// Checks

void run_hd_gauss(Ctx& c) {
    for (int q : c["q"]) {
        const auto& T = shared_tower(q);
        for (int m : c["m"])
            for (int b : c["b"])
                for (int64_t j = 0; j < T.units(m); ++j) {
                    MultChar chi{m, j};
                    auto w = where({{"q", str(q)}, {"m", str(m)}, {"b", str(b)}, {"chi", format_char(chi)}});
                    cplx g = gauss_sum(T, chi);
                    if (b == 1) {
                        c.cmp(std::abs(g), j == 0 ? 1.0 : std::pow(double(q), 0.5 * m), w + " modulus");
                        continue;
                    }
                    cplx up = gauss_sum(T, inflate(T, chi, b * m));
                    c.cmp(std::pow(g, b), up, w, scale_of(up));
                }
    }
}

void run_hd_exotic(Ctx& c) {
    for (int q : c["q"]) {
        const auto& T = shared_tower(q);
        const int dual_cap = c.first("dual_lcm"), hd_cap = c.first("hd_lcm");
        for (int k : c["k"])
            for (int m : c["m"]) {
                // defining sum against the product of Gauss sums, all characters
                if (lcm64(k, m) <= dual_cap) {
                    auto w0 = where({{"q", str(q)}, {"k", str(k)}, {"m", str(m)}});
                    c.guard(w0, [&] {
                        UnitHistogram H(T, unit_layout(T, {k}, m), c.budget);
                        const double s = sgn(k + m + k * m);
                        for (int64_t a = 0; a < T.units(k); ++a)
                            for (int64_t x = 0; x < T.units(m); ++x) {
                                MultChar al{k, a}, ch{m, x};
                                cplx direct = s * H.pair(T, {al}, ch);
                                cplx prod = exotic_gauss_product(T, k, m, al, ch);
                                c.cmp(direct, prod, w0 + " alpha=" + format_char(al) + " chi=" + format_char(ch),
                                      scale_of(prod));
                            }
                    });
                }
                for (int b : c["b"]) {
                    if (lcm64(b * k, m) > hd_cap || lcm64(k, b * m) > hd_cap) continue;
                    for (int64_t a = 0; a < T.units(k); ++a)
                        for (int64_t x = 0; x < T.units(m); ++x) {
                            MultChar al{k, a}, ch{m, x};
                            auto w = where({{"q", str(q)}, {"k", str(k)}, {"m", str(m)}, {"b", str(b)},
                                            {"alpha", format_char(al)}, {"chi", format_char(ch)}});
                            cplx base = std::pow(exotic_gauss_product(T, k, m, al, ch), b);
                            cplx up1 = exotic_gauss_product(T, b * k, m, inflate(T, al, b * k), ch);
                            cplx up2 = exotic_gauss_product(T, k, b * m, al, inflate(T, ch, b * m));
                            c.cmp(base, up1, w + " alpha-side", scale_of(up1));
                            c.cmp(base, up2, w + " chi-side", scale_of(up2));
                        }
                }
            }
        // composite characters: lambda = (2,1), defining sum raised to the b-th power
        for (int b : c["b"]) {
            if (lcm64(2, b) > hd_cap) continue;
            for (int64_t a = 0; a < T.units(2); ++a)
                for (int64_t x = 0; x < T.units(1); ++x) {
                    CompositeChar A{{2, 1}, {MultChar{2, a}, MultChar{1, (a + 1) % T.units(1)}}};
                    MultChar ch{1, x};
                    auto w = where({{"q", str(q)}, {"lambda", "(2,1)"}, {"alpha", str(A)}, {"chi", format_char(ch)},
                                    {"b", str(b)}});
                    c.guard(w, [&] {
                        cplx lhs = std::pow(composite_exotic_gauss_direct(T, A, 1, ch), b);
                        cplx rhs = composite_exotic_gauss(T, A, b, inflate(T, ch, b));
                        c.cmp(lhs, rhs, w, scale_of(rhs));
                    });
                }
        }
    }
}

void run_gauss_kl_transform(Ctx& c) {
    for (int q : c["q"]) {
        const auto& T = shared_tower(q);
        for (auto& A : lambdas_from(c, T, false, c.first("samples")))
            for (int m : c["m"]) {
                const int k = A.k(), s = A.s();
                auto w0 = where({{"q", str(q)}, {"lambda", str(A.lambda)}, {"alpha", str(A)}, {"m", str(m)}});
                c.guard(w0, [&] {
                    UnitHistogram H(T, unit_layout(T, A.lambda, m), c.budget);
                    const int64_t N = T.units(m);
                    std::vector<cplx> kl(static_cast<size_t>(N));
                    for (int64_t t = 0; t < N; ++t) kl[t] = H.fiber(T, A.alpha, t);
                    for (int64_t x = 0; x < N; ++x) {
                        MultChar ch{m, x};
                        cplx sum = 0;
                        for (int64_t t = 0; t < N; ++t) sum += kl[t] * eval_mult_log(T, ch, t);
                        cplx rhs = sgn(k + s * m + m * k) * sum;
                        cplx lhs = composite_exotic_gauss(T, A, m, ch);
                        c.cmp(lhs, rhs, w0 + " chi=" + format_char(ch), scale_of(lhs));
                    }
                });
            }
    }
}

void run_l_purity(Ctx& c) {
    const double root_factor = 1e-4 / 1e-6;
    const double cap = double(c.first("max_level_size"));
    for (int q : c["q"]) {
        auto As = lambdas_from(c, shared_tower(q), false, c.first("samples"));
        // validate as many series coefficients past k as the field sizes allow
        auto feasible = [&](const std::vector<int>& la, int a, int upto) {
            for (int l : lpolynomial_levels(la, a, upto))
                if (std::pow(double(q), l) > cap) return l;
            return 0;
        };
        std::vector<int> levels;
        for (auto& A : As)
            for (int a : c["a"])
                for (int n = A.k(); n <= A.k() + 3 && !feasible(A.lambda, a, n); ++n)
                    for (int l : lpolynomial_levels(A.lambda, a, n)) levels.push_back(l);
        const auto& T = shared_tower(q, levels);
        for (auto& A : As)
            for (int a : c["a"]) {
                const int k = A.k();
                int upto = k;
                while (upto < k + 3 && !feasible(A.lambda, a, upto + 1)) ++upto;
                if (upto < k + 3)
                    c.skip(where({{"q", str(q)}, {"lambda", str(A.lambda)}, {"alpha", str(A)}, {"a", str(a)}}),
                           "series coefficients " + str(upto + 1) + ".." + str(k + 3) + " need F_{q^" +
                               str(feasible(A.lambda, a, upto + 1)) + "}, above max_level_size");
                for (int64_t t = 0; t < T.units(a); ++t) {
                    Elem xi = T.from_log(a, t);
                    auto w = where({{"q", str(q)}, {"lambda", str(A.lambda)}, {"alpha", str(A)}, {"a", str(a)},
                                    {"xi", "g^" + str(t)}});
                    c.guard(w, [&] {
                        auto L = lpolynomial(T, A, a, xi, upto);
                        for (int n = k + 1; n <= upto; ++n)
                            c.cmp(L.series.at(size_t(n)), 0.0, w + " coeff " + str(n));
                        c.cmp(double(L.roots.size()), double(k), w + " root count");
                        for (auto r : L.roots) c.cmp(std::abs(r), 1.0, w + " |root|", 1.0, root_factor);
                    });
                }
            }
    }
}

std::vector<std::pair<int, int>> group_grid(const Ctx& c) {
    std::vector<std::pair<int, int>> out;
    for (int q : c["q"])
        for (int n : c["c"]) out.push_back({q, n});
    return out;
}

void run_kondo(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        auto w0 = where({{"q", str(q)}, {"c", str(n)}});
        if (!group_fits(c, T, n)) {
            c.skip(w0, "group order above max_order");
            continue;
        }
        c.guard(w0, [&] {
            for (auto& pi : enumerate_parameters(T, n))
                for (int64_t j = 0; j < T.units(1); ++j) {
                    MultChar chi{1, j};
                    c.cmp(kondo_scalar(T, pi, chi, c.budget), kondo_gauss_closed(T, pi, chi),
                          w0 + " pi=" + format_parameter(pi) + " chi=" + format_char(chi));
                }
        });
    }
}

void run_exotic_kondo(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        if (!group_fits(c, T, n)) {
            c.skip(where({{"q", str(q)}, {"c", str(n)}}), "group order above max_order");
            continue;
        }
        for (int k : c["k"]) {
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"k", str(k)}});
            c.guard(w0, [&] {
                for (auto& pi : enumerate_parameters(T, n))
                    for (int64_t j = 0; j < T.units(k); ++j) {
                        MultChar chi{k, j};
                        c.cmp(kondo_scalar(T, pi, chi, c.budget), kondo_exotic_closed(T, pi, {{k}, {chi}}),
                              w0 + " pi=" + format_parameter(pi) + " chi=" + format_char(chi));
                    }
            });
        }
        // composite characters: product of the single-component sums
        for (auto& A : std::vector<CompositeChar>{{{1, 1}, {MultChar{1, 0}, MultChar{1, T.units(1) - 1}}},
                                                  {{2, 1}, {MultChar{2, 1}, MultChar{1, 0}}}}) {
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"alpha", str(A)}});
            c.guard(w0, [&] {
                for (auto& pi : enumerate_parameters(T, n)) {
                    cplx prod = 1;
                    for (auto& x : A.alpha) prod *= kondo_scalar(T, pi, x, c.budget);
                    c.cmp(prod, kondo_exotic_closed(T, pi, A), w0 + " pi=" + format_parameter(pi));
                }
            });
        }
    }
}

void run_hd_kondo(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        for (int base : c["base"])
            for (int m : c["m"]) {
                auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"base", str(base)}, {"m", str(m)}});
                if (!T.has_level(base * m)) {
                    c.skip(w0, "level outside tower");
                    continue;
                }
                const double order = gl_cardinality(T.qpow(base * m), n);
                if (order > double(c.first("max_order"))) {
                    std::ostringstream s;
                    s << "|GL_" << n << "(F_" << T.qpow(base * m) << ")| = " << order << " above max_order";
                    c.skip(w0, s.str());
                    continue;
                }
                c.guard(w0, [&] {
                    for (auto& pi : enumerate_parameters(T, n))
                        for (int64_t j = 0; j < T.units(base); ++j) {
                            MultChar chi{base, j};
                            cplx g = kondo_scalar(T, pi, chi, c.budget);
                            cplx up = kondo_scalar(T, pi, inflate(T, chi, base * m), c.budget);
                            c.cmp(up, sgn(n * (m - 1)) * std::pow(g, m),
                                  w0 + " pi=" + format_parameter(pi) + " chi=" + format_char(chi));
                        }
                });
            }
    }
}

void run_mks_def(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        for (auto& A : lambdas_from(c, T, true, 0)) {
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"alpha", str(A)}});
            c.guard(w0, [&] {
                auto K = mks_convolve_function(T, A, n, c.budget);
                for (auto& pi : enumerate_parameters(T, n)) {
                    auto& chi = character_of(T, pi);
                    cplx s = 0;
                    for (size_t i = 0; i < K.v.size(); ++i) s += double(K.table->sizes[i]) * K.v[i] * chi.v[i];
                    s *= std::pow(double(q), -0.5 * A.k() * n * n);
                    cplx g = 1;
                    for (auto& x : A.alpha) g *= kondo_scalar(T, pi, x, c.budget);
                    c.cmp(s, double(character_dimension(T, pi)) * g, w0 + " pi=" + format_parameter(pi));
                }
            });
        }
    }
}

void run_mks_reduce(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        for (int m : c["m"])
            for (int64_t j = 0; j < T.units(1); ++j) {
                MultChar base{1, j};
                auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"m", str(m)}, {"chi'", format_char(base)}});
                c.guard(w0, [&] {
                    auto rep = mks_reduce_nonregular(T, inflate(T, base, m), base, n, c.budget);
                    for (size_t i = 0; i < rep.lhs.size(); ++i)
                        c.cmp(rep.lhs[i], rep.rhs[i], w0 + " h=" + format_class(rep.classes[i]),
                              mks_scale(q, m, n));
                });
            }
    }
}

void run_eps_gamma(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        for (auto& A : tau_list(T)) {
            const int k = A.k(), s = A.s();
            auto tau = generic_parameter(T, A);
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"tau", str(A)}});
            c.guard(w0, [&] {
                for (auto& pi : enumerate_parameters(T, n)) {
                    auto w = w0 + " pi=" + format_parameter(pi);
                    if (is_generic(pi)) c.cmp(gamma_gk(T, pi, A), epsilon0(T, pi, tau), w + " gamma");
                    c.cmp(kondo_exotic_closed(T, pi, A),
                          sgn((k + s) * n) * epsilon0(T, dual_parameter(T, pi), dual_parameter(T, tau)),
                          w + " exotic Gauss");
                }
            });
        }
    }
}

void run_bs_mult_tau(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        std::vector<std::array<CompositeChar, 2>> pairs;
        if (q == 2)
            pairs.push_back({CompositeChar{{2}, {MultChar{2, 1}}}, CompositeChar{{1}, {MultChar{1, 0}}}});
        else
            pairs.push_back({CompositeChar{{1}, {MultChar{1, 1}}}, CompositeChar{{1}, {MultChar{1, 0}}}});
        for (auto& [t1, t2] : pairs) {
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"tau1", str(t1)}, {"tau2", str(t2)}});
            if ((t1.k() + t2.k()) * n > c.first("max_kc")) {
                c.skip(w0, "kc above max_kc");
                continue;
            }
            auto t12 = make_composite(T, {t1.lambda[0], t2.lambda[0]}, {t1.alpha[0], t2.alpha[0]});
            c.guard(w0, [&] {
                auto& B1 = bessel_speh_function(T, t1, n);
                auto& B2 = bessel_speh_function(T, t2, n);
                auto& B = bessel_speh_function(T, t12, n);
                std::vector<cplx> sum(B.v.size(), 0.0);
                std::vector<MatrixGL> reps;
                for (auto& cl : B.table->classes) reps.push_back(class_representative(T, cl));
                for_each_gl(T, n, 1, c.budget, [&](const MatrixGL& x) {
                    cplx bx = B1.at(T, x);
                    auto xi = mat_inv(T, x);
                    for (size_t i = 0; i < reps.size(); ++i) {
                        auto y = mat_mul(T, xi, mat_neg(T, reps[i]));
                        sum[i] += bx * B2.at(T, y);
                    }
                });
                for (size_t i = 0; i < sum.size(); ++i)
                    c.cmp(B.v[i], sum[i] * std::pow(double(q), -double(n * n)),
                          w0 + " h=" + format_class(B.table->classes[i]));
            });
        }
    }
}

void run_bs_mult_class(Ctx& c) {
    for (int q : c["q"]) {
        const auto& T = shared_tower(q);
        for (auto& A : tau_list(T)) {
            const int k = A.k();
            auto w0 = where({{"q", str(q)}, {"tau", str(A)}});
            if (2 * k > c.first("max_kc")) {
                c.skip(w0, "kc above max_kc");
                continue;
            }
            c.guard(w0, [&] {
                auto& B2 = bessel_speh_function(T, A, 2);
                auto& B1 = bessel_speh_function(T, A, 1);
                for (auto& x : class_table(T, 1).classes)
                    for (auto& y : class_table(T, 1).classes) {
                        auto h1 = class_representative(T, x), h2 = class_representative(T, y);
                        c.cmp(block_unipotent_average(T, B2, h1, h2),
                              std::pow(double(q), -double(k - 1)) * B1(x) * B1(y),
                              w0 + " h1=" + format_class(x) + " h2=" + format_class(y));
                    }
            });
        }
    }
}

void run_bs_kloosterman(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        for (auto& A : tau_list(T)) {
            const int k = A.k(), s = A.s();
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"tau", str(A)}});
            if (k * n > c.first("max_kc")) {
                c.skip(w0, "kc above max_kc");
                continue;
            }
            c.guard(w0, [&] {
                auto inv = composite_inverse(T, A);
                auto& tab = class_table(T, n);
                // cuspidal tau: average the explicit Speh character over U_{(c^k)}
                ClassFunction speh;
                const bool explicit_speh = s == 1 && k > 1;
                if (explicit_speh) speh = speh_character(T, A.alpha[0], n);
                for (size_t i = 0; i < tab.size(); ++i) {
                    auto h = class_representative(T, tab.classes[i]);
                    cplx b = explicit_speh ? bessel_speh(T, speh, k, n, antidiagonal_embedding(T, h, k))
                                           : bessel_speh_function(T, A, n).v[i];
                    cplx bstar = b * std::pow(double(q), 0.5 * (k - 1) * n * n);
                    auto g = mat_inv(T, h);
                    if ((k - 1) % 2) g = mat_neg(T, g);
                    cplx kstar = mks_normalized(T, inv, identify_class(T, g), MksPath::conv, c.budget);
                    c.cmp(bstar, sgn((k + s) * n) * kstar, w0 + " h=" + format_class(tab.classes[i]));
                }
            });
        }
    }
}

std::vector<CompositeChar> mult_alphas(const FieldTower& T) {
    std::vector<CompositeChar> v = {{{2}, {MultChar{2, 1}}}, {{1}, {MultChar{1, 0}}},
                                    {{2, 1}, {MultChar{2, 1}, MultChar{1, 0}}}};
    if (T.q() > 2) v.push_back({{1, 1}, {MultChar{1, 0}, MultChar{1, 1}}});
    return v;
}

void run_mks_mult(Ctx& c) {
    for (int q : c["q"]) {
        const auto& T = shared_tower(q);
        for (auto& A : mult_alphas(T)) {
            const int k = A.k();
            auto w0 = where({{"q", str(q)}, {"alpha", str(A)}});
            c.guard(w0, [&] {
                auto K2 = mks_convolve_function(T, A, 2, c.budget);
                auto K1 = mks_convolve_function(T, A, 1, c.budget);
                const double s2 = mks_scale(q, k, 2), s1 = mks_scale(q, k, 1);
                for (auto& x : class_table(T, 1).classes)
                    for (auto& y : class_table(T, 1).classes) {
                        auto h1 = class_representative(T, x), h2 = class_representative(T, y);
                        auto w = w0 + " h1=" + format_class(x) + " h2=" + format_class(y);
                        c.cmp(block_unipotent_average(T, K2, h1, h2) / s2, K1(x) * K1(y) / (s1 * s1), w + " average");
                        if (x != y)
                            c.cmp(K2.at(T, block_diag(T, {h1, h2})), std::pow(double(q), k - 1) * K1(x) * K1(y),
                                  w + " disjoint", s2);
                    }
            });
        }
    }
}

void run_mks_hl(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        for (auto& A : lambdas_from(c, T, true, 0)) {
            const int k = A.k(), s = A.s();
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"alpha", str(A)}});
            c.guard(w0, [&] {
                auto conv = mks_convolve_function(T, A, n, c.budget);
                auto hl = mks_hl_function(T, A, n);
                const double sc = mks_scale(q, k, n);
                auto& tab = *conv.table;
                for (size_t i = 0; i < tab.size(); ++i) {
                    const auto& h = tab.classes[i];
                    auto w = w0 + " h=" + format_class(h);
                    c.cmp(conv.v[i] / sc, hl.v[i] / sc, w + " hl");
                    // regular classes: symmetric powers of the Kloosterman roots
                    if (is_regular_class(h)) {
                        cplx prod = sgn((k - 1) * n) * std::pow(double(q), -0.5 * (k - 1) * n);
                        for (auto& b : h.blocks)
                            prod *= complete_on(b.mu[0], kloosterman_roots(T, A, b.orbit.a, orbit_element(T, b.orbit)));
                        c.cmp(conv.v[i] / sc, prod, w + " symmetric power");
                    }
                }
                // special Bessel-Speh values through the normalized roots of Kl(alpha^{-1}) at
                // (-1)^{k-1} xi^{-1}; roots of Kl(alpha) at xi itself do not give B* in general
                if (k * n > c.first("max_kc")) return;
                auto& B = bessel_speh_function(T, A, n);
                for (size_t i = 0; i < tab.size(); ++i) {
                    const auto& h = tab.classes[i];
                    cplx prod = 1;
                    auto Ainv = composite_inverse(T, A);
                    for (auto& b : h.blocks) {
                        Elem y = T.inv(orbit_element(T, b.orbit));
                        if ((k - 1) % 2) y = T.neg(y);
                        auto L = lpolynomial(T, Ainv, b.orbit.a, y);
                        std::vector<cplx> x = L.roots;
                        for (auto& r : x) r *= sgn((s - 1) * b.orbit.a);
                        prod *= hhat_on_roots(b.mu, T.qpow(b.orbit.a), x);
                    }
                    c.cmp(B.v[i] * std::pow(double(q), 0.5 * (k - 1) * n * n), prod,
                          w0 + " h=" + format_class(h) + " Bessel-Speh");
                }
            });
        }
    }
}

void run_chmap(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        auto w0 = where({{"q", str(q)}, {"n", str(n)}});
        if (!group_fits(c, T, n)) {
            c.skip(w0, "group order above max_order");
            continue;
        }
        c.guard(w0, [&] {
            auto f = sample_function(T, n, 0.37), g = sample_function(T, n, 1.91);
            const cplx a = inner(f, g);
            c.cmp(lambda_inner(T, charmap(f), charmap(g)), a, w0 + " class side");
            c.cmp(lambda_hat_inner(class_to_character_side(T, charmap(f)), class_to_character_side(T, charmap(g))), a,
                  w0 + " character side");
            auto back = from_charmap(T, charmap(f));
            for (size_t i = 0; i < f.v.size(); ++i) c.cmp(back.v[i], f.v[i], w0 + " round trip");
            auto& tab = character_table(T, n);
            double sq = 0;
            for (size_t i = 0; i < tab.chars.size(); ++i) {
                for (size_t j = 0; j < tab.chars.size(); ++j)
                    c.cmp(inner(tab.chars[i], tab.chars[j]), i == j ? 1.0 : 0.0,
                          w0 + " <" + format_parameter(tab.params[i]) + "," + format_parameter(tab.params[j]) + ">");
                c.cmp(dimension_formula(q, tab.params[i]), double(tab.dims[i]),
                      w0 + " dim " + format_parameter(tab.params[i]));
                sq += double(tab.dims[i]) * double(tab.dims[i]);
            }
            c.cmp(double(tab.chars.size()), double(tab.classes->size()), w0 + " table is square");
            c.cmp(sq, double(tab.classes->order), w0 + " sum of squared dimensions", double(tab.classes->order));
        });
    }
}

void run_global_g(Ctx& c) {
    for (int q : c["q"]) {
        const auto& T = shared_tower(q);
        std::vector<CompositeChar> alphas = mult_alphas(T);
        if (q == 2) alphas.push_back({{1, 1}, {MultChar{1, 0}, MultChar{1, 0}}});
        for (auto& A : alphas)
            for (int n : c["n"]) {
                auto w0 = where({{"q", str(q)}, {"alpha", str(A)}, {"n", str(n)}});
                c.guard(w0, [&] {
                    auto g = global_truncation(T, A, n);
                    auto both = [&](const LambdaFElement& u, const LambdaFElement& v, const std::string& side) {
                        std::set<ClassLabel> keys;
                        for (auto& [l, x] : u.coeffs) keys.insert(l);
                        for (auto& [l, x] : v.coeffs) keys.insert(l);
                        for (auto& l : keys) c.cmp(u.coeff(l), v.coeff(l), w0 + " " + side + " " + format_class(l));
                    };
                    both(g.from_hl, g.euler, "class side");
                    both(g.from_hl_hat, g.euler_hat, "character side");
                });
            }
    }
}

void run_whittaker(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        for (auto& A : tau_list(T)) {
            const int k = A.k();
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"tau", str(A)}});
            if (k * n > c.first("max_kc")) {
                c.skip(w0, "kc above max_kc");
                continue;
            }
            if (n != 2) {
                c.skip(w0, "transform implemented for c = 2");
                continue;
            }
            c.guard(w0, [&] {
                auto& B = bessel_speh_function(T, A, n);
                for (auto& cl : class_table(T, n).classes) {
                    auto h = class_representative(T, cl);
                    cplx s = 0;
                    for (int64_t x = 0; x < q; ++x) {
                        MatrixGL u = identity_matrix(T, 2, 1);
                        u(0, 1) = T.from_code(1, x);
                        s += B.at(T, mat_mul(T, h, u)) * std::conj(psi(T, u(0, 1)));
                    }
                    c.cmp(f_transform(T, A, h), std::pow(double(q), k - 1) * s, w0 + " h=" + format_class(cl));
                }
            });
        }
    }
}

void run_zerocycle(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        for (int k : c["k"]) {
            if (k <= n) continue;
            CompositeChar A{{k}, {MultChar{k, 1}}};
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"alpha", str(A)}});
            c.guard(w0, [&] {
                for (int64_t i = 0; i < T.units(1); ++i)
                    for (int64_t j = 0; j < T.units(1); ++j) {
                        Elem t1 = T.from_log(1, i), t2 = T.from_log(1, j);
                        auto w = w0 + " t1=g^" + str(i) + " t2=g^" + str(j);
                        c.cmp(zero_cycle_bessel(T, A, n, t1, t2), zero_cycle_sum(T, A, n, t1, t2), w);
                    }
                for (int64_t i = 0; i < T.units(1); ++i)
                    c.cmp(double(zero_cycle_count(T, n, T.from_log(1, i))), std::pow(double(q), n - 1),
                          w0 + " cycles with det g^" + str(i));
            });
        }
    }
}

void run_genseries(Ctx& c) {
    const int top = c.first("degree");
    for (int q : c["q"]) {
        const auto& T = shared_tower(q);
        std::vector<CompositeChar> alphas = {{{2}, {MultChar{2, 1}}}, {{3}, {MultChar{3, 1}}}};
        if (q > 2) alphas.push_back({{1, 1}, {MultChar{1, 0}, MultChar{1, 1}}});
        for (auto& A : alphas) {
            const int k = A.k(), s = A.s();
            auto tau = generic_parameter(T, A);
            auto inv = composite_inverse(T, A);
            for (int64_t t = 0; t < T.units(1); ++t) {
                auto w0 = where({{"q", str(q)}, {"alpha", str(A)}, {"x", "g^" + str(t)}});
                c.guard(w0, [&] {
                    Elem x = T.from_log(1, t);
                    std::vector<cplx> poly(size_t(k) + 1, 0.0);
                    for (int r = 0; r <= k; ++r) {
                        MatrixGL g = zero_matrix(T, k, 1);
                        for (int i = 0; i < k - r; ++i) g(i, r + i) = T.one(1);
                        for (int i = 0; i < r; ++i) g(k - r + i, i) = x;
                        poly[r] = std::pow(double(q), 0.5 * r * (k - r)) * bessel(T, tau, g);
                    }
                    std::vector<cplx> inv_series(size_t(top) + 1, 0.0);
                    inv_series[0] = 1.0 / poly[0];
                    for (int m = 1; m <= top; ++m) {
                        cplx acc = 0;
                        for (int i = 1; i <= std::min(m, k); ++i) acc += poly[i] * inv_series[m - i];
                        inv_series[m] = -acc / poly[0];
                    }
                    Elem y = T.inv(x);
                    if ((k - 1) % 2) y = T.neg(y);
                    auto L = lpolynomial(T, inv, 1, y, top);
                    std::vector<cplx> Linv(size_t(top) + 1, 0.0);
                    Linv[0] = 1.0;
                    for (int m = 1; m <= top; ++m) {
                        cplx acc = 0;
                        for (int i = 1; i <= m && i < int(L.coeffs.size()); ++i) acc += L.coeffs[i] * Linv[m - i];
                        Linv[m] = -acc;
                    }
                    for (int r = 1; r <= top; ++r) {
                        ClassLabel jr{{{orbit_of(T, y), {r}}}};
                        cplx kstar = sgn(r) * sgn((k + s) * r) * mks_normalized(T, inv, jr, MksPath::hl, c.budget);
                        c.cmp(inv_series[r], kstar, w0 + " Bessel coefficient T^" + str(r));
                        c.cmp(Linv[r] * sgn(s * r), kstar, w0 + " L coefficient T^" + str(r));
                    }
                });
            }
        }
    }
}

void run_bounds(Ctx& c) {
    for (auto [q, n] : group_grid(c)) {
        const auto& T = shared_tower(q);
        for (auto& A : lambdas_from(c, T, false, c.first("samples"))) {
            auto w0 = where({{"q", str(q)}, {"c", str(n)}, {"alpha", str(A)}});
            c.guard(w0, [&] {
                for (auto& h : class_table(T, n).classes) {
                    auto w = w0 + " h=" + format_class(h);
                    double v = std::abs(mks_normalized(T, A, h, MksPath::hl, c.budget));
                    double bound = mks_flag_bound(T, A.k(), h);
                    c.le(v, bound, w + " flag bound");
                    if (is_regular_class(h)) c.le(bound, mks_regular_bound(A.k(), h), w + " binomial bound");
                }
            });
        }
    }
}

void run_appendix(Ctx& c) {
    for (int q : c["q"]) {
        const auto& T = shared_tower(q);
        if (!T.has_level(4)) {
            c.skip(where({{"q", str(q)}}), "level 4 outside tower");
            continue;
        }
        for (int64_t j = 0; j < T.units(2); ++j) {
            MultChar theta{2, j};
            if (!is_regular(T, theta)) continue;
            auto w0 = where({{"q", str(q)}, {"theta", format_char(theta)}});
            c.guard(w0, [&] {
                auto sp = speh_character(T, theta, 2);
                std::set<ClassLabel> rows;
                for (auto& row : speh_table_rows(T, theta)) {
                    auto w = w0 + " " + row.type + " " + format_class(row.cls);
                    cplx v = sp(row.cls);
                    c.cmp(v, row.table, w);
                    // integral table entries must match exactly after rounding
                    cplx rt(std::round(row.table.real()), std::round(row.table.imag()));
                    if (std::abs(rt - row.table) < 1e-9)
                        c.cmp(cplx(std::round(v.real()), std::round(v.imag())), rt, w + " rounded");
                    rows.insert(row.cls);
                }
                for (size_t i = 0; i < sp.v.size(); ++i)
                    if (!rows.count(sp.table->classes[i]))
                        c.cmp(sp.v[i], 0.0, w0 + " off-table " + format_class(sp.table->classes[i]));
            });
        }
    }
}

// ---------------------------------------------------------------------------------------
// Registry

struct CheckSpec {
    std::string id;
    std::string description;
    Grid grid;
    double tol;
    std::function<void(Ctx&)> run;
};

const std::vector<CheckSpec>& registry() {
    static const std::vector<CheckSpec> R = {
        {"HD-GAUSS", "Gauss sum modulus and Hasse-Davenport lifting", {{"q", {2, 3, 4}}, {"m", {1, 2, 3}}, {"b", {1, 2}}},
         1e-8, run_hd_gauss},
        {"HD-EXOTIC", "exotic Gauss sums: defining sum vs Gauss-sum product, Hasse-Davenport in both slots",
         {{"q", {2, 3}}, {"k", {1, 2, 3, 4}}, {"m", {1, 2, 3, 4}}, {"b", {2, 3}}, {"dual_lcm", {4}}, {"hd_lcm", {6}}},
         1e-6, run_hd_exotic},
        {"GAUSS-KL-TRANSFORM", "exotic Gauss sum as the Mellin transform of direct Kloosterman fibers",
         {{"q", {2, 3}}, {"lambda", {0, 1, 2, 3, 4}}, {"m", {1, 2}}, {"samples", {3}}}, 1e-6, run_gauss_kl_transform},
        {"L-PURITY", "L-function of Kloosterman sums is a degree-k polynomial with unit-modulus normalized roots",
         {{"q", {2, 3}}, {"lambda", {0, 1, 2, 3, 4}}, {"a", {1, 2}}, {"samples", {3}}, {"max_level_size", {1 << 20}}},
         1e-6, run_l_purity},
        {"KONDO", "Kondo Gauss sums: trace sum vs product of Gauss sums",
         {{"q", {2, 3}}, {"c", {2, 3}}, {"max_order", {200}}}, 1e-6, run_kondo},
        {"EXOTIC-KONDO", "non-abelian exotic Gauss sums: trace sum over GL_c(F_{q^k}) vs closed form",
         {{"q", {2, 3}}, {"c", {2, 3}}, {"k", {2, 3}}, {"max_order", {200}}}, 1e-6, run_exotic_kondo},
        {"HD-KONDO", "Hasse-Davenport for non-abelian exotic Gauss sums",
         {{"q", {2, 3}}, {"c", {2}}, {"base", {1, 2}}, {"m", {2, 3}}, {"max_order", {2000000}}}, 1e-6, run_hd_kondo},
        {"MKS-DEF", "matrix Kloosterman sums reproduce dim(pi) times the Gauss-sum scalar",
         {{"q", {2, 3}}, {"c", {2}}, {"lambda", {1, 2, 4}}}, 1e-6, run_mks_def},
        {"MKS-REDUCE", "non-regular characters reduce to regular ones with a sign",
         {{"q", {2, 3}}, {"c", {1, 2}}, {"m", {2, 3}}}, 1e-6, run_mks_reduce},
        {"EPS-GAMMA", "Ginzburg-Kaplan gamma factors equal epsilon factors; exotic Gauss sums vs dual epsilon",
         {{"q", {2, 3}}, {"c", {1, 2}}}, 1e-6, run_eps_gamma},
        {"BS-MULT-TAU", "Bessel-Speh special values are multiplicative in tau",
         {{"q", {2, 3}}, {"c", {1, 2}}, {"max_kc", {4}}}, 1e-6, run_bs_mult_tau},
        {"BS-MULT-CLASS", "Bessel-Speh special values are multiplicative in the class",
         {{"q", {2, 3}}, {"max_kc", {4}}}, 1e-6, run_bs_mult_class},
        {"BS-KLOOSTERMAN", "Bessel-Speh special values are exotic matrix Kloosterman sums",
         {{"q", {2, 3}}, {"c", {1, 2}}, {"max_kc", {4}}}, 1e-6, run_bs_kloosterman},
        {"MKS-MULT", "matrix Kloosterman sums: unipotent average factors, disjoint spectra factor",
         {{"q", {2, 3}}}, 1e-6, run_mks_mult},
        {"MKS-HL", "matrix Kloosterman sums: convolution vs Hall-Littlewood, symmetric powers, Bessel-Speh roots",
         {{"q", {2, 3}}, {"c", {1, 2}}, {"lambda", {1, 2, 4}}, {"max_kc", {4}}}, 1e-6, run_mks_hl},
        {"CHMAP", "characteristic maps are isometries; Green's formula gives an orthonormal character table",
         {{"q", {2, 3}}, {"c", {1, 2, 3}}, {"max_order", {20000}}}, 1e-8, run_chmap},
        {"GLOBAL-G", "global Kloosterman class function vs both Euler products", {{"q", {2, 3}}, {"n", {1, 2}}}, 1e-5,
         run_global_g},
        {"WHITTAKER", "Whittaker transform of Bessel-Speh special values",
         {{"q", {2, 3}}, {"c", {2}}, {"max_kc", {4}}}, 1e-6, run_whittaker},
        {"ZEROCYCLE", "Bessel value at a sparse element as a sum over zero-cycles",
         {{"q", {2, 3}}, {"c", {2}}, {"k", {3}}}, 1e-6, run_zerocycle},
        {"GENSERIES", "Bessel generating polynomial inverts to the Kloosterman L-function",
         {{"q", {2, 3}}, {"degree", {4}}}, 1e-6, run_genseries},
        {"BOUNDS", "normalized sums are bounded by fixed weak-flag counts",
         {{"q", {2, 3}}, {"c", {1, 2, 3}}, {"lambda", {0, 1, 2, 3, 4}}, {"samples", {2}}}, 1e-9, run_bounds},
        {"APPENDIX-TABLE", "Speh character for k = c = 2 against the explicit table", {{"q", {2, 3}}}, 1e-6, run_appendix},
    };
    return R;
}

const CheckSpec& spec_of(const std::string& id) {
    for (auto& s : registry())
        if (s.id == id) return s;
    throw std::invalid_argument("unknown check id: " + id);
}

}  // namespace

// ---------------------------------------------------------------------------------------

const FieldTower& shared_tower(int64_t q) {
    static std::mutex m;
    static std::map<int64_t, std::unique_ptr<FieldTower>> cache;
    std::lock_guard lock(m);
    auto& slot = cache[q];
    if (!slot) {
        int p = 0;
        for (int64_t d = 2; d * d <= q && !p; ++d)
            if (q % d == 0) p = int(d);
        if (!p) p = int(q);
        int f = 0;
        int64_t r = q;
        while (r % p == 0) r /= p, ++f;
        if (q < 2 || r != 1) throw std::invalid_argument("q must be a prime power");
        if (q == 2)
            slot = std::make_unique<FieldTower>(2, 1, 12);
        else if (q == 3)
            slot = std::make_unique<FieldTower>(3, 1, std::vector<int>{4, 5, 6, 12});
        else
            slot = std::make_unique<FieldTower>(p, f, q <= 7 ? 6 : 4);
    }
    return *slot;
}

const FieldTower& shared_tower(int64_t q, std::vector<int> levels) {
    const auto& base = shared_tower(q);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    bool inside = true;
    for (int l : levels) inside = inside && base.has_level(l);
    if (inside) return base;
    static std::mutex m;
    static std::map<std::pair<int64_t, std::vector<int>>, std::unique_ptr<FieldTower>> cache;
    std::lock_guard lock(m);
    auto& slot = cache[{q, levels}];
    if (!slot) {
        for (int l = 1; l <= base.max_deg(); ++l)
            if (base.has_level(l)) levels.push_back(l);
        slot = std::make_unique<FieldTower>(base.p(), base.f(), levels);
    }
    return *slot;
}

std::vector<SpehTableRow> speh_table_rows(const FieldTower& T, const MultChar& theta) {
    std::vector<SpehTableRow> out;
    const double q = double(T.q());
    const MultChar thq = char_frob(T, theta, 1);
    auto th = [&](const Elem& x) { return eval_mult(T, theta, T.embed(x, 2)); };
    auto tq = [&](const Elem& x) { return eval_mult(T, thq, T.embed(x, 2)); };
    auto tr = [&](const Elem& x) { return th(x) + tq(x); };
    auto add = [&](const char* type, std::vector<ClassBlock> blocks, cplx v) {
        out.push_back({type, canonical(ClassLabel{std::move(blocks)}), v});
    };
    auto d1 = orbits_of_degree(T, 1), d2 = orbits_of_degree(T, 2), d4 = orbits_of_degree(T, 4);
    for (auto& o : d4) {
        Elem nx = T.norm(orbit_element(T, o), 2);
        add("h(xi4)", {{o, {1}}}, tr(nx));
    }
    for (size_t i = 0; i < d2.size(); ++i)
        for (size_t j = i + 1; j < d2.size(); ++j)
            add("diag(h(xi2),h(xi2'))", {{d2[i], {1}}, {d2[j], {1}}},
                tr(orbit_element(T, d2[i])) * tr(orbit_element(T, d2[j])));
    for (auto& o2 : d2)
        for (auto& o1 : d1) {
            Elem x2 = orbit_element(T, o2), x1 = orbit_element(T, o1);
            cplx v = th(x1) * th(x2) + th(x1) * tq(x2);
            add("diag(h(xi2),J(2)(xi1))", {{o1, {2}}, {o2, {1}}}, v);
            add("diag(h(xi2),J(1,1)(xi1))", {{o1, {1, 1}}, {o2, {1}}}, (1 - q) * v);
        }
    for (auto& o2 : d2) {
        Elem x = orbit_element(T, o2);
        cplx a = th(x), b = tq(x);
        add("J(2)(h(xi2))", {{o2, {2}}}, a * a + b * b + a * b);
        add("J(1,1)(h(xi2))", {{o2, {1, 1}}}, (q * q + 1) * a * b + a * a + b * b);
    }
    for (size_t i = 0; i < d1.size(); ++i)
        for (size_t j = 0; j < d1.size(); ++j) {
            if (i == j) continue;
            cplx v = th(orbit_element(T, d1[i])) * th(orbit_element(T, d1[j]));
            if (i < j) add("diag(J(2)(xi1),J(2)(xi1'))", {{d1[i], {2}}, {d1[j], {2}}}, v);
            add("diag(J(2)(xi1),J(1,1)(xi1'))", {{d1[i], {2}}, {d1[j], {1, 1}}}, (1 - q) * v);
            if (i < j) add("diag(J(1,1)(xi1),J(1,1)(xi1'))", {{d1[i], {1, 1}}, {d1[j], {1, 1}}}, (q - 1) * (q - 1) * v);
        }
    for (auto& o1 : d1) {
        cplx t2 = th(orbit_element(T, o1));
        t2 *= t2;
        add("J(4)(xi1)", {{o1, {4}}}, t2);
        add("J(3,1)(xi1)", {{o1, {3, 1}}}, (1 - q) * t2);
        add("J(2,2)(xi1)", {{o1, {2, 2}}}, (q * q - q + 1) * t2);
        add("J(2,1,1)(xi1)", {{o1, {2, 1, 1}}}, (1 - q) * t2);
        add("J(1,1,1,1)(xi1)", {{o1, {1, 1, 1, 1}}}, (q * q * q * q - q * q * q - q + 1) * t2);
    }
    return out;
}

const std::vector<std::string>& speh_table_types() {
    static const std::vector<std::string> v = {
        "h(xi4)",
        "diag(h(xi2),h(xi2'))",
        "diag(h(xi2),J(2)(xi1))",
        "diag(h(xi2),J(1,1)(xi1))",
        "J(2)(h(xi2))",
        "J(1,1)(h(xi2))",
        "diag(J(2)(xi1),J(2)(xi1'))",
        "diag(J(2)(xi1),J(1,1)(xi1'))",
        "diag(J(1,1)(xi1),J(1,1)(xi1'))",
        "J(4)(xi1)",
        "J(3,1)(xi1)",
        "J(2,2)(xi1)",
        "J(2,1,1)(xi1)",
        "J(1,1,1,1)(xi1)",
    };
    return v;
}

const std::vector<std::string>& check_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (auto& s : registry()) v.push_back(s.id);
        return v;
    }();
    return ids;
}

bool has_check(const std::string& id) {
    for (auto& s : registry())
        if (s.id == id) return true;
    return false;
}

const Grid& default_grid(const std::string& id) { return spec_of(id).grid; }
double check_tolerance(const std::string& id) { return spec_of(id).tol; }
std::string check_description(const std::string& id) { return spec_of(id).description; }

CheckReport run_check(const std::string& id, const CheckParams& params) {
    const auto& spec = spec_of(id);
    CheckReport r;
    r.id = id;
    r.tol = params.tol > 0 ? params.tol : spec.tol;
    r.grid = spec.grid;
    for (auto& [k, v] : params.fixed) {
        auto it = r.grid.find(k);
        if (it != r.grid.end()) it->second = {v};
    }
    const int64_t budget = params.budget > 0 ? params.budget : default_budget();
    auto t0 = std::chrono::steady_clock::now();
    Ctx ctx(r.grid, budget, r);
    try {
        spec.run(ctx);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = r.error.empty() && !r.lhs.empty() && r.abs_err <= r.tol;
    if (r.lhs.empty() && r.error.empty()) r.error = "no grid point evaluated";
    return r;
}

std::vector<CheckReport> run_checks(const std::vector<std::string>& ids, const CheckParams& params, int threads) {
    for (auto& id : ids) spec_of(id);
    std::vector<CheckReport> out(ids.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next++) < ids.size();) out[i] = run_check(ids[i], params);
    };
    const int n = std::max(1, std::min<int>(threads, int(ids.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

namespace {
nlohmann::ordered_json complex_json(cplx z) {
    auto round12 = [](double x) {
        if (x == 0 || !std::isfinite(x)) return x == 0 ? 0.0 : x;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", x);
        double y = std::strtod(buf, nullptr);
        return y == 0 ? 0.0 : y;
    };
    const double floor = 1e-12 * std::max(1.0, std::abs(z));
    return {{"re", round12(std::abs(z.real()) < floor ? 0.0 : z.real())},
            {"im", round12(std::abs(z.imag()) < floor ? 0.0 : z.imag())}};
}
}  // namespace

std::string report_json(const CheckReport& r, bool timing) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (auto& [k, v] : r.grid) params[k] = v;
    j["params"] = params;
    j["comparisons"] = r.lhs.size();
    const size_t worst = r.worst_index;
    j["lhs"] = r.lhs.empty() ? nlohmann::ordered_json() : complex_json(r.lhs[worst]);
    j["rhs"] = r.rhs.empty() ? nlohmann::ordered_json() : complex_json(r.rhs[worst]);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", r.abs_err);
    j["abs_err"] = std::strtod(buf, nullptr);
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    j["worst"] = r.worst;
    j["skipped"] = r.skipped;
    if (!r.error.empty()) j["error"] = r.error;
    if (timing) {
        std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
        j["wall_s"] = std::strtod(buf, nullptr);
    }
    return j.dump();
}

}  // namespace exo
