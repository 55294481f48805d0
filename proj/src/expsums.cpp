#include "exotic/expsums.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace exo {

namespace {

int parity_sign(int64_t e) { return (e % 2 == 0) ? 1 : -1; }

void check_alpha(const std::vector<int>& lambda, const std::vector<MultChar>& alpha) {
    if (lambda.size() != alpha.size()) throw std::invalid_argument("one character per part is required");
    for (size_t i = 0; i < lambda.size(); ++i)
        if (alpha[i].level != lambda[i])
            throw std::invalid_argument("alpha_" + std::to_string(i + 1) + " must live at level " +
                                        std::to_string(lambda[i]));
}

}  // namespace

int CompositeChar::k() const { return std::accumulate(lambda.begin(), lambda.end(), 0); }

CompositeChar make_composite(const FieldTower& T, const std::vector<int>& lambda, const std::vector<MultChar>& alpha) {
    check_alpha(lambda, alpha);
    CompositeChar c{lambda, alpha};
    for (auto& a : c.alpha) a.j = mod(a.j, T.units(a.level));
    return c;
}

CompositeChar composite_inverse(const FieldTower& T, const CompositeChar& a) {
    CompositeChar r = a;
    for (auto& x : r.alpha) x = char_inv(T, x);
    return r;
}

bool is_regular(const FieldTower& T, const CompositeChar& a) {
    for (auto& x : a.alpha)
        if (!is_regular(T, x)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// histogram of (N1, N2, trace) over a unit group

UnitHistogram::UnitHistogram(const FieldTower& T, const UnitLayout& L, int64_t budget)
    : p_(T.p()), n1_mod_(L.n1_mod), n2_mod_(L.n2_mod) {
    double card = L.cardinality(T);
    if (card > double(budget))
        throw BudgetError("unit group has " + std::to_string(int64_t(card)) + " elements, budget " +
                              std::to_string(budget),
                          card);
    n1_size_ = 1;
    for (auto v : n1_mod_) n1_size_ *= v;
    double cells = double(n1_size_) * double(n2_mod_) * p_;
    if (cells > double(int64_t(1) << 27)) throw BudgetError("histogram too large", cells);
    h_.assign(size_t(cells), 0);

    const size_t C = L.coords.size();
    const size_t S = n1_mod_.size();
    std::vector<int64_t> stride(S, 1);
    for (size_t i = 1; i < S; ++i) stride[i] = stride[i - 1] * n1_mod_[i - 1];
    std::vector<int64_t> a1(C), a2(C), U(C);
    std::vector<const uint8_t*> tr(C);
    for (size_t c = 0; c < C; ++c) {
        const auto& u = L.coords[c];
        U[c] = T.units(u.level);
        int64_t nk = n1_mod_[u.slot];
        // with compatible generators N(g_l^t) = g_k^t, so norms just reduce logs
        a1[c] = mod(u.n1_weight, nk);
        a2[c] = mod(u.weight, n2_mod_);
        tr[c] = T.trace_by_log(u.level);
    }

    std::vector<int64_t> n1(S, 0);
    const int p = p_;
    const int64_t N2 = n2_mod_;
    // depth-first over coordinates; the last coordinate runs in a tight loop
    std::function<void(size_t, int64_t, int)> rec = [&](size_t c, int64_t n2, int t0) {
        const int slot = L.coords[c].slot;
        const int64_t nk = n1_mod_[slot];
        const int64_t saved = n1[slot];
        if (c + 1 == C) {
            int64_t rest = 0;
            for (size_t i = 0; i < S; ++i)
                if (int(i) != slot) rest += n1[i] * stride[i];
            int64_t x1 = saved, x2 = n2;
            for (int64_t t = 0; t < U[c]; ++t) {
                int r = t0 + tr[c][t];
                if (r >= p) r -= p;
                ++h_[size_t(((rest + x1 * stride[slot]) * N2 + x2) * p + r)];
                x1 += a1[c];
                if (x1 >= nk) x1 -= nk;
                x2 += a2[c];
                if (x2 >= N2) x2 -= N2;
            }
            return;
        }
        int64_t x2 = n2;
        for (int64_t t = 0; t < U[c]; ++t) {
            int r = t0 + tr[c][t];
            if (r >= p) r -= p;
            rec(c + 1, x2, r);
            n1[slot] += a1[c];
            if (n1[slot] >= nk) n1[slot] -= nk;
            x2 += a2[c];
            if (x2 >= N2) x2 -= N2;
        }
        n1[slot] = saved;
    };
    if (C == 0) {
        h_[0] = 1;
        return;
    }
    rec(0, 0, 0);
}

cplx UnitHistogram::cell(const FieldTower& T, int64_t n1, int64_t n2) const {
    const int64_t* c = &h_[size_t((n1 * n2_mod_ + n2) * p_)];
    cplx s = 0;
    for (int r = 0; r < p_; ++r)
        if (c[r]) s += double(c[r]) * psi_prime(T, r);
    return s;
}

std::vector<cplx> UnitHistogram::alpha_weights(const FieldTower& T, const std::vector<MultChar>& alpha) const {
    if (alpha.size() != n1_mod_.size()) throw std::invalid_argument("character count does not match the layout");
    std::vector<cplx> w(n1_size_, 1.0);
    int64_t stride = 1;
    for (size_t i = 0; i < alpha.size(); ++i) {
        if (T.units(alpha[i].level) != n1_mod_[i]) throw std::invalid_argument("character level does not match");
        for (int64_t idx = 0; idx < n1_size_; ++idx) w[idx] *= eval_mult_log(T, alpha[i], idx / stride % n1_mod_[i]);
        stride *= n1_mod_[i];
    }
    return w;
}

cplx UnitHistogram::pair(const FieldTower& T, const std::vector<MultChar>& alpha, const MultChar& chi) const {
    if (T.units(chi.level) != n2_mod_) throw std::invalid_argument("chi level does not match the layout");
    auto w = alpha_weights(T, alpha);
    cplx s = 0;
    for (int64_t a = 0; a < n1_size_; ++a) {
        cplx inner = 0;
        for (int64_t b = 0; b < n2_mod_; ++b) inner += eval_mult_log(T, chi, b) * cell(T, a, b);
        s += w[a] * inner;
    }
    return s;
}

cplx UnitHistogram::fiber(const FieldTower& T, const std::vector<MultChar>& alpha, int64_t t) const {
    auto w = alpha_weights(T, alpha);
    t = mod(t, n2_mod_);
    cplx s = 0;
    for (int64_t a = 0; a < n1_size_; ++a) s += w[a] * cell(T, a, t);
    return s;
}

// ---------------------------------------------------------------------------
// Gauss sums

cplx exotic_gauss(const FieldTower& T, int k, int m, const MultChar& alpha, const MultChar& chi) {
    check_alpha({k}, {alpha});
    if (chi.level != m) throw std::invalid_argument("chi must live at level m");
    UnitHistogram H(T, unit_layout(T, {k}, m), default_budget());
    return double(parity_sign(k + m + k * m)) * H.pair(T, {alpha}, chi);
}

cplx exotic_gauss_product(const FieldTower& T, int k, int m, const MultChar& alpha, const MultChar& chi) {
    check_alpha({k}, {alpha});
    if (chi.level != m) throw std::invalid_argument("chi must live at level m");
    const int l = int(lcm64(k, m)), d = int(gcd64(k, m));
    const auto& G = gauss_table(T, l);
    const int64_t N = T.units(l);
    const int64_t ja = inflate(T, alpha, l).j;
    cplx r = 1;
    for (int j = 0; j < d; ++j) r *= G[size_t(mod(ja + inflate(T, char_frob(T, chi, j), l).j, N))];
    return r;
}

cplx composite_exotic_gauss(const FieldTower& T, const CompositeChar& alpha, int m, const MultChar& chi) {
    cplx r = 1;
    for (size_t i = 0; i < alpha.lambda.size(); ++i)
        r *= exotic_gauss_product(T, alpha.lambda[i], m, alpha.alpha[i], chi);
    return r;
}

cplx composite_exotic_gauss_direct(const FieldTower& T, const CompositeChar& alpha, int m, const MultChar& chi) {
    check_alpha(alpha.lambda, alpha.alpha);
    UnitHistogram H(T, unit_layout(T, alpha.lambda, m), default_budget());
    return double(parity_sign(alpha.k() + alpha.s() * m + m * alpha.k())) * H.pair(T, alpha.alpha, chi);
}

// ---------------------------------------------------------------------------
// Kloosterman sums

namespace {

struct KlKey {
    int p, f, M;
    std::vector<int> lambda;
    std::vector<int64_t> alpha;
    auto operator<=>(const KlKey&) const = default;
};

struct KlCache {
    std::mutex mu;
    std::map<KlKey, std::unique_ptr<std::vector<cplx>>> tables;
};

KlCache& kl_cache() {
    static KlCache c;
    return c;
}

}  // namespace

const std::vector<cplx>& kloosterman_table(const FieldTower& T, const CompositeChar& alpha, int M) {
    check_alpha(alpha.lambda, alpha.alpha);
    KlKey key{T.p(), T.f(), M, alpha.lambda, {}};
    for (auto& a : alpha.alpha) key.alpha.push_back(mod(a.j, T.units(a.level)));
    auto& kc = kl_cache();
    {
        std::lock_guard<std::mutex> lk(kc.mu);
        auto it = kc.tables.find(key);
        if (it != kc.tables.end()) return *it->second;
    }
    const int64_t N = T.units(M);
    // P_j = tau_{lambda, M}(alpha, chi_j); Kl is its inverse Fourier transform
    std::vector<cplx> P(N, 1.0);
    for (size_t i = 0; i < alpha.lambda.size(); ++i) {
        const int k = alpha.lambda[i];
        const int l = int(lcm64(k, M)), d = int(gcd64(k, M));
        const auto& G = gauss_table(T, l);
        const int64_t Nl = T.units(l);
        const int64_t ja = inflate(T, alpha.alpha[i], l).j;
        const int64_t scale = Nl / N;
        for (int64_t j = 0; j < N; ++j) {
            cplx r = 1;
            MultChar chi{M, j};
            for (int e = 0; e < d; ++e) {
                int64_t jc = char_frob(T, chi, e).j;
                r *= G[size_t(mod(ja + int64_t(__int128(jc) * scale % Nl), Nl))];
            }
            P[j] *= r;
        }
    }
    const int k = alpha.k(), s = alpha.s();
    const double sign = parity_sign(k + int64_t(s) * M + int64_t(M) * k);
    fftw_complex* buf = fftw_alloc_complex(N);
    for (int64_t j = 0; j < N; ++j) {
        buf[j][0] = P[j].real();
        buf[j][1] = P[j].imag();
    }
    // forward transform: sum_j x_j exp(-2 pi i j t / N)
    fftw_plan plan = fftw_plan_dft_1d(int(N), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    auto out = std::make_unique<std::vector<cplx>>(N);
    for (int64_t t = 0; t < N; ++t) (*out)[t] = sign / double(N) * cplx(buf[t][0], buf[t][1]);
    fftw_free(buf);
    std::lock_guard<std::mutex> lk(kc.mu);
    auto [it, inserted] = kc.tables.emplace(std::move(key), std::move(out));
    return *it->second;
}

cplx kloosterman(const FieldTower& T, const CompositeChar& alpha, int a, int m, const Elem& xi) {
    if (xi.level != a * m) throw std::invalid_argument("xi must live at level a*m");
    if (xi.is_zero()) throw std::invalid_argument("xi must be nonzero");
    return kloosterman_table(T, alpha, a * m)[size_t(xi.log())];
}

cplx kloosterman_normalized(const FieldTower& T, const CompositeChar& alpha, int a, int m, const Elem& xi) {
    return std::pow(double(T.q()), -0.5 * (alpha.k() - 1) * a * m) * kloosterman(T, alpha, a, m, xi);
}

cplx kloosterman_brute(const FieldTower& T, const CompositeChar& alpha, int a, int m, const Elem& xi,
                       int64_t budget) {
    check_alpha(alpha.lambda, alpha.alpha);
    if (xi.level != a * m) throw std::invalid_argument("xi must live at level a*m");
    if (xi.is_zero()) throw std::invalid_argument("xi must be nonzero");
    UnitHistogram H(T, base_change_layout(T, alpha.lambda, a, m), budget);
    return H.fiber(T, alpha.alpha, xi.log());
}

// ---------------------------------------------------------------------------
// L-functions

std::vector<cplx> lseries(const FieldTower& T, const CompositeChar& alpha, int a, const Elem& xi, int upto) {
    if (xi.level != a) throw std::invalid_argument("xi must live at level a");
    const int k = alpha.k();
    std::vector<cplx> f(upto + 1, 0.0);
    for (int m = 1; m <= upto; ++m) {
        cplx kl = kloosterman_normalized(T, alpha, a, m, T.embed(xi, a * m));
        f[m] = double(parity_sign(k)) * kl / double(m);
    }
    std::vector<cplx> e(upto + 1, 0.0);
    e[0] = 1;
    for (int n = 1; n <= upto; ++n) {
        cplx s = 0;
        for (int i = 1; i <= n; ++i) s += double(i) * f[i] * e[n - i];
        e[n] = s / double(n);
    }
    return e;
}

std::vector<cplx> roots_of(const std::vector<cplx>& c) {
    // roots of T^k + c_1 T^{k-1} + ... + c_k, i.e. the inverse roots of sum c_i T^i
    const int k = int(c.size()) - 1;
    if (k <= 0) return {};
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(k, k);
    for (int i = 0; i < k; ++i) C(0, i) = -c[i + 1] / c[0];
    for (int i = 1; i < k; ++i) C(i, i - 1) = 1;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cplx> r(k);
    for (int i = 0; i < k; ++i) r[i] = es.eigenvalues()[i];
    return r;
}

LPolynomial lpolynomial(const FieldTower& T, const CompositeChar& alpha, int a, const Elem& xi, int validate_upto) {
    const int k = alpha.k();
    LPolynomial L;
    L.a = a;
    L.series = lseries(T, alpha, a, xi, std::max(k, validate_upto));
    L.coeffs.assign(L.series.begin(), L.series.begin() + k + 1);
    L.roots = roots_of(L.coeffs);
    return L;
}

std::vector<cplx> kloosterman_roots(const FieldTower& T, const CompositeChar& alpha, int a, const Elem& xi) {
    auto r = lpolynomial(T, alpha, a, xi).roots;
    const double s = std::pow(double(T.q()), 0.5 * a * (alpha.k() - 1));
    for (auto& x : r) x *= s;
    return r;
}

std::vector<int> kloosterman_levels(const std::vector<int>& lambda, int M) {
    std::vector<int> out{M};
    for (int k : lambda) out.push_back(int(lcm64(k, M)));
    return out;
}

std::vector<int> lpolynomial_levels(const std::vector<int>& lambda, int a, int upto) {
    std::vector<int> out;
    for (int m = 1; m <= upto; ++m)
        for (int l : kloosterman_levels(lambda, a * m)) out.push_back(l);
    for (int k : lambda) out.push_back(k);
    return out;
}

}  // namespace exo
