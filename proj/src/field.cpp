#include "exotic/field.hpp"

#include <algorithm>

namespace exo {

int64_t ipow(int64_t b, int e) {
    int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

int64_t gcd64(int64_t a, int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

int64_t lcm64(int64_t a, int64_t b) { return a / gcd64(a, b) * b; }

int64_t mod(int64_t a, int64_t n) {
    int64_t r = a % n;
    return r < 0 ? r + n : r;
}

std::vector<int64_t> prime_factors(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// Dense polynomials over F_p, low degree first.
using Poly = std::vector<int>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmod(Poly a, const Poly& f, int p) {
    trim(a);
    int df = int(f.size()) - 1;
    int lead_inv = 1;
    while (lead_inv * f.back() % p != 1) ++lead_inv;
    while (int(a.size()) - 1 >= df) {
        int c = a.back() * lead_inv % p;
        int shift = int(a.size()) - 1 - df;
        for (int i = 0; i <= df; ++i) a[shift + i] = ((a[shift + i] - c * f[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

Poly pmul(const Poly& a, const Poly& b, int p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
}

Poly psub(Poly a, const Poly& b, int p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
    trim(a);
    return a;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& f, int p) { return pmod(pmul(a, b, p), f, p); }

Poly powmod(Poly a, int64_t e, const Poly& f, int p) {
    Poly r{1};
    r = pmod(r, f, p);
    a = pmod(a, f, p);
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, f, p);
        a = mulmod(a, a, f, p);
        e >>= 1;
    }
    return r;
}

Poly pgcd(Poly a, Poly b, int p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = pmod(a, b, p);
        a = b;
        b = r;
    }
    return a;
}

bool irreducible(const Poly& f, int p) {
    int d = int(f.size()) - 1;
    if (d == 1) return true;
    if (f[0] == 0) return false;
    Poly x{0, 1};
    Poly xp = x;
    // x^{p^d} == x mod f, and no factor shared with x^{p^{d/r}} - x
    std::vector<Poly> frob(d + 1);
    frob[0] = x;
    for (int i = 1; i <= d; ++i) {
        xp = powmod(xp, p, f, p);
        frob[i] = xp;
    }
    if (!psub(frob[d], x, p).empty()) return false;
    for (int64_t r : prime_factors(d)) {
        Poly g = pgcd(f, psub(frob[d / r], x, p), p);
        if (g.size() > 1) return false;
    }
    return true;
}

int64_t to_code(const Poly& a, int p) {
    int64_t c = 0;
    for (int i = int(a.size()) - 1; i >= 0; --i) c = c * p + a[i];
    return c;
}

// The i-th vector in lexicographic order with the constant term most significant.
Poly lex_vector(int64_t idx, int p, int d) {
    Poly a(d, 0);
    for (int i = d - 1; i >= 0; --i) {
        a[i] = int(idx % p);
        idx /= p;
    }
    return a;
}

int64_t add_codes(int64_t a, int64_t b, int p) {
    if (p == 2) return a ^ b;
    int64_t r = 0, w = 1;
    while (a || b) {
        r += ((a % p + b % p) % p) * w;
        a /= p;
        b /= p;
        w *= p;
    }
    return r;
}

}  // namespace

FieldTower::FieldTower(int p, int f, int max_deg, int64_t cap) : p_(p), f_(f), max_deg_(max_deg) {
    std::vector<int> all;
    for (int m = 1; m <= max_deg; ++m) all.push_back(m);
    init(all, cap);
}

FieldTower::FieldTower(int p, int f, const std::vector<int>& levels, int64_t cap) : p_(p), f_(f), max_deg_(0) {
    for (int m : levels) max_deg_ = std::max(max_deg_, m);
    init(levels, cap);
}

void FieldTower::init(const std::vector<int>& levels, int64_t cap) {
    if (!is_prime(p_)) throw FieldError("p = " + std::to_string(p_) + " is not prime");
    if (f_ < 1 || max_deg_ < 1) throw FieldError("f and max_deg must be positive");
    q_ = ipow(p_, f_);
    std::vector<bool> want(max_deg_ + 1, false);
    for (int m : levels) {
        if (m < 1) throw FieldError("levels must be positive");
        for (int d = 1; d <= m; ++d)
            if (m % d == 0) want[d] = true;
    }
    for (int m = 1; m <= max_deg_; ++m) {
        if (!want[m]) continue;
        double sz = 1;
        for (int i = 0; i < f_ * m; ++i) sz *= p_;
        if (sz > double(cap) || sz > 2147483647.0)
            throw FieldError("level " + std::to_string(m) + " has " + std::to_string(int64_t(sz)) +
                             " elements, above the table cap " + std::to_string(cap));
    }
    levels_.resize(max_deg_);
    for (int m = 1; m <= max_deg_; ++m)
        if (want[m]) build_level(m);
}

void FieldTower::build_level(int m) {
    Level& L = levels_[m - 1];
    const int d = f_ * m;
    const int p = p_;
    L.size = ipow(p, d);
    const int64_t N = L.size - 1;

    for (int64_t idx = 0;; ++idx) {
        Poly f = lex_vector(idx, p, d);
        f.push_back(1);
        if (irreducible(f, p)) {
            L.modulus = f;
            break;
        }
    }
    const Poly& F = L.modulus;
    const Poly one = pmod(Poly{1}, F, p);

    // Minimal polynomials of the generators already fixed at divisor levels.
    std::vector<std::pair<int, Poly>> sub;
    for (int e = 1; e < m; ++e) {
        if (m % e) continue;
        const Level& S = levels_[e - 1];
        const int64_t Ne = S.size - 1;
        // prod_{i<f e} (X - g^{p^i}) over level e, coefficients land in F_p
        std::vector<Elem> mp{Elem{e, 1}};
        int64_t pe = 1 % Ne;
        for (int i = 0; i < f_ * e; ++i) {
            Elem root{e, 1 + mod(pe, Ne)};
            std::vector<Elem> nx(mp.size() + 1, Elem{e, 0});
            for (size_t j = 0; j < mp.size(); ++j) {
                nx[j + 1] = add(nx[j + 1], mp[j]);
                nx[j] = add(nx[j], neg(mul(mp[j], root)));
            }
            mp = nx;
            pe = (pe * p) % Ne;
        }
        Poly mpoly(mp.size());
        for (size_t j = 0; j < mp.size(); ++j) mpoly[j] = int(code(mp[j]));
        sub.emplace_back(e, mpoly);
    }

    const auto factors = prime_factors(N);
    Poly g;
    for (int64_t idx = 1;; ++idx) {
        if (idx >= L.size) throw FieldError("no compatible generator at level " + std::to_string(m));
        Poly cand = lex_vector(idx, p, d);
        trim(cand);
        if (cand.empty()) continue;
        bool ok = true;
        for (int64_t r : factors)
            if (powmod(cand, N / r, F, p) == one) {
                ok = false;
                break;
            }
        if (!ok) continue;
        for (auto& [e, mp] : sub) {
            const int64_t Ne = ipow(q_, e) - 1;
            Poly y = powmod(cand, N / Ne, F, p);
            Poly acc;
            for (int j = int(mp.size()) - 1; j >= 0; --j) {
                acc = mulmod(acc, y, F, p);
                acc = psub(acc, Poly{(p - mp[j]) % p}, p);
            }
            if (!acc.empty()) {
                ok = false;
                break;
            }
        }
        if (ok) {
            g = cand;
            break;
        }
    }

    L.exp.assign(N, 0);
    L.lg.assign(L.size, -1);
    Poly cur = one;
    for (int64_t t = 0; t < N; ++t) {
        int64_t c = to_code(cur, p);
        L.exp[t] = int32_t(c);
        L.lg[c] = int32_t(t);
        cur = mulmod(cur, g, F, p);
    }
    if (N == 1) {
        L.exp[0] = 1;
        L.lg[1] = 0;
    }
    L.m = m;
    L.zech.assign(N, -1);
    for (int64_t n = 0; n < N; ++n) {
        int64_t c = add_codes(L.exp[n], 1, p);
        L.zech[n] = c == 0 ? -1 : L.lg[c];
    }
    L.neg_one_log = (p == 2) ? 0 : N / 2;

    // absolute trace is F_p-linear in the code digits
    std::vector<int> tb(d, 0);
    for (int i = 0; i < d; ++i) {
        Elem x = from_code(m, ipow(p, i));
        Elem s = zero(m);
        Elem y = x;
        for (int j = 0; j < d; ++j) {
            s = add(s, y);
            y = pow(y, p);
        }
        int64_t c = code(s);
        if (c >= p) throw FieldError("trace left the prime field");
        tb[i] = int(c);
    }
    L.trlog.assign(N, 0);
    for (int64_t t = 0; t < N; ++t) {
        int64_t c = L.exp[t];
        int s = 0;
        for (int i = 0; i < d; ++i) {
            s += int(c % p) * tb[i];
            c /= p;
        }
        L.trlog[t] = uint8_t(s % p);
    }
}

Elem FieldTower::from_code(int m, int64_t c) const {
    const Level& L = lv(m);
    if (c < 0 || c >= L.size) throw FieldError("code out of range");
    return c == 0 ? Elem{m, 0} : Elem{m, 1 + L.lg[c]};
}

Elem FieldTower::from_int(int m, int64_t c) const { return from_code(m, mod(c, p_)); }

int64_t FieldTower::code(const Elem& x) const { return x.v == 0 ? 0 : lv(x.level).exp[x.v - 1]; }

static void same_level(const Elem& a, const Elem& b) {
    if (a.level != b.level) throw FieldError("level mismatch");
}

Elem FieldTower::mul(const Elem& a, const Elem& b) const {
    same_level(a, b);
    if (a.v == 0 || b.v == 0) return {a.level, 0};
    const int64_t N = units(a.level);
    int64_t t = a.v - 1 + b.v - 1;
    if (t >= N) t -= N;
    return {a.level, 1 + t};
}

Elem FieldTower::inv(const Elem& a) const {
    if (a.v == 0) throw FieldError("inverse of zero");
    return {a.level, 1 + mod(-(a.v - 1), units(a.level))};
}

Elem FieldTower::div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

Elem FieldTower::pow(const Elem& a, int64_t e) const {
    if (a.v == 0) {
        if (e == 0) return one(a.level);
        if (e < 0) throw FieldError("negative power of zero");
        return a;
    }
    const int64_t N = units(a.level);
    __int128 t = __int128(a.v - 1) * mod(e, N);
    return {a.level, 1 + int64_t(t % N)};
}

Elem FieldTower::add(const Elem& a, const Elem& b) const {
    same_level(a, b);
    if (a.v == 0) return b;
    if (b.v == 0) return a;
    const Level& L = lv(a.level);
    const int64_t N = L.size - 1;
    int64_t la = a.v - 1, lb = b.v - 1;
    int64_t d = lb - la;
    if (d < 0) d += N;
    int64_t z = L.zech[d];
    if (z < 0) return {a.level, 0};
    int64_t t = la + z;
    if (t >= N) t -= N;
    return {a.level, 1 + t};
}

Elem FieldTower::neg(const Elem& a) const {
    if (a.v == 0) return a;
    const Level& L = lv(a.level);
    int64_t t = a.v - 1 + L.neg_one_log;
    if (t >= L.size - 1) t -= L.size - 1;
    return {a.level, 1 + t};
}

Elem FieldTower::frobenius(const Elem& x, int64_t j) const {
    if (x.v == 0) return x;
    const int64_t N = units(x.level);
    int64_t e = mod(j, x.level);
    int64_t qe = 1;
    for (int64_t i = 0; i < e; ++i) qe = (qe * q_) % N;
    __int128 t = __int128(x.v - 1) * qe;
    return {x.level, 1 + int64_t(t % N)};
}

Elem FieldTower::embed(const Elem& x, int n) const {
    if (n % x.level) throw FieldError("embedding needs level " + std::to_string(x.level) + " | " + std::to_string(n));
    if (x.v == 0) return {n, 0};
    int64_t s = units(n) / units(x.level);
    return {n, 1 + (x.v - 1) * s};
}

bool FieldTower::in_subfield(const Elem& x, int m) const {
    if (x.level % m) return false;
    if (x.v == 0) return true;
    int64_t s = units(x.level) / units(m);
    return (x.v - 1) % s == 0;
}

Elem FieldTower::descend(const Elem& x, int m) const {
    if (!in_subfield(x, m)) throw FieldError("element not in subfield of level " + std::to_string(m));
    if (x.v == 0) return {m, 0};
    int64_t s = units(x.level) / units(m);
    return {m, 1 + (x.v - 1) / s};
}

Elem FieldTower::norm(const Elem& x, int m) const {
    if (x.level % m) throw FieldError("norm needs " + std::to_string(m) + " | " + std::to_string(x.level));
    if (x.v == 0) return {m, 0};
    return {m, 1 + (x.v - 1) % units(m)};
}

Elem FieldTower::trace(const Elem& x, int m) const {
    if (x.level % m) throw FieldError("trace needs " + std::to_string(m) + " | " + std::to_string(x.level));
    Elem s = zero(x.level);
    for (int j = 0; j < x.level / m; ++j) s = add(s, frobenius(x, int64_t(j) * m));
    return descend(s, m);
}

int FieldTower::abs_trace(const Elem& x) const {
    if (x.v == 0) return 0;
    return lv(x.level).trlog[x.v - 1];
}

int FieldTower::degree(const Elem& x) const {
    for (int d = 1; d <= x.level; ++d)
        if (x.level % d == 0 && in_subfield(x, d)) return d;
    return x.level;
}

int64_t FieldTower::orbit_min_log(const Elem& x) const {
    if (x.v == 0) throw FieldError("zero has no orbit label");
    Elem y = descend(x, degree(x));
    int64_t best = y.v - 1;
    for (int j = 1; j < y.level; ++j) best = std::min(best, frobenius(y, j).v - 1);
    return best;
}

}  // namespace exo
