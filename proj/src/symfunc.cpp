#include "exotic/symfunc.hpp"

#include "exotic/field.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace exo {

namespace {

using Mat = std::vector<std::vector<Rational>>;
constexpr int kMaxDegree = 8;

void check_degree(int d) {
    if (d < 0 || d > kMaxDegree)
        throw std::invalid_argument("symmetric function degree " + std::to_string(d) + " out of range");
}

int index_of(int d, const Partition& la) {
    const auto& P = partitions_of(d);
    auto it = std::find(P.begin(), P.end(), la);
    if (it == P.end()) throw std::invalid_argument("not a partition of " + std::to_string(d) + ": " + format_partition(la));
    return int(it - P.begin());
}

Mat identity(int n) {
    Mat I(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

Mat invert(Mat A) {
    const int n = int(A.size());
    Mat B = identity(n);
    for (int c = 0; c < n; ++c) {
        int r = c;
        while (r < n && A[r][c] == 0) ++r;
        if (r == n) throw std::runtime_error("singular transition matrix");
        std::swap(A[r], A[c]);
        std::swap(B[r], B[c]);
        Rational inv = 1 / A[c][c];
        for (int j = 0; j < n; ++j) {
            A[c][j] *= inv;
            B[c][j] *= inv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || A[i][c] == 0) continue;
            Rational k = A[i][c];
            for (int j = 0; j < n; ++j) {
                A[i][j] -= k * A[c][j];
                B[i][j] -= k * B[c][j];
            }
        }
    }
    return B;
}

// column j of the matrix holds basis element j in monomial coordinates
std::vector<Rational> mat_apply(const Mat& M, const std::vector<Rational>& v) {
    const int n = int(v.size());
    std::vector<Rational> out(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (v[j] != 0 && M[i][j] != 0) out[i] += M[i][j] * v[j];
    return out;
}

Rational rpow(const Rational& x, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

// [m]_t! = prod_{j<=m} (1 + t + ... + t^{j-1})
Rational qfactorial(int m, const Rational& t) {
    Rational r = 1, s = 0, tp = 1;
    for (int j = 1; j <= m; ++j) {
        s += tp;
        tp *= t;
        r *= s;
    }
    return r;
}

// ---- combinatorial transition data -------------------------------------------------------

thread_local std::map<std::pair<Partition, Partition>, Rational> kostka_memo;

Rational kostka(const Partition& la, const Partition& mu) {
    if (mu.empty()) return la.empty() ? 1 : 0;
    auto key = std::make_pair(la, mu);
    if (auto it = kostka_memo.find(key); it != kostka_memo.end()) return it->second;
    // strip the largest entries: a horizontal strip of size mu.back()
    const int r = mu.back();
    Partition rest(mu.begin(), mu.end() - 1);
    Rational total = 0;
    Partition sub = la;
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
        if (i == la.size()) {
            if (left == 0) {
                Partition s;
                for (int x : sub)
                    if (x > 0) s.push_back(x);
                total += kostka(s, rest);
            }
            return;
        }
        const int lower = i + 1 < la.size() ? la[i + 1] : 0;
        for (int take = 0; take <= std::min(left, la[i] - lower); ++take) {
            sub[i] = la[i] - take;
            rec(i + 1, left - take);
        }
        sub[i] = la[i];
    };
    rec(0, r);
    kostka_memo[key] = total;
    return total;
}

// number of maps from the parts of rho onto the rows of mu with matching row sums
Rational power_monomial_coeff(const Partition& rho, const Partition& mu) {
    std::vector<int> left(mu.begin(), mu.end());
    Rational count = 0;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == rho.size()) {
            for (int x : left)
                if (x != 0) return;
            count += 1;
            return;
        }
        for (auto& x : left) {
            if (x >= rho[i]) {
                x -= rho[i];
                rec(i + 1);
                x += rho[i];
            }
        }
    };
    rec(0);
    return count;
}

// ---- Hall-Littlewood P with t kept symbolic ------------------------------------------------

using ZPoly = std::vector<int64_t>;  // coefficients in t

void zadd(ZPoly& a, const ZPoly& b, int64_t sign, int shift) {
    if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] += sign * b[i];
}

constexpr int kBits = 6;
uint64_t pack(const std::vector<int>& e) {
    uint64_t k = 0;
    for (size_t i = 0; i < e.size(); ++i) k |= uint64_t(e[i]) << (kBits * i);
    return k;
}
int unpack(uint64_t k, int i) { return int((k >> (kBits * i)) & ((1u << kBits) - 1)); }

// Schur coefficients of v_la(t) P_la(x_1..x_d; t), as polynomials in t
const std::map<Partition, ZPoly>& hl_numerator(const Partition& la) {
    static std::mutex mu;
    static std::map<Partition, std::map<Partition, ZPoly>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(la); it != cache.end()) return it->second;

    const int d = part_size(la);
    std::vector<int> e(d, 0);
    for (size_t i = 0; i < la.size(); ++i) e[i] = la[i];
    std::unordered_map<uint64_t, ZPoly> F{{pack(e), ZPoly{1}}};
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            std::unordered_map<uint64_t, ZPoly> G;
            G.reserve(F.size() * 2);
            for (auto& [k, c] : F) {
                zadd(G[k + (uint64_t(1) << (kBits * i))], c, 1, 0);
                zadd(G[k + (uint64_t(1) << (kBits * j))], c, -1, 1);
            }
            F.swap(G);
        }
    std::map<Partition, ZPoly> out;
    for (auto& [k, c] : F) {
        std::vector<int> b(d);
        for (int i = 0; i < d; ++i) b[i] = unpack(k, i);
        // sort descending, tracking the sign of the permutation
        int sign = 1;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j + 1 < d - i; ++j)
                if (b[j] < b[j + 1]) {
                    std::swap(b[j], b[j + 1]);
                    sign = -sign;
                }
        bool distinct = true;
        for (int i = 0; i + 1 < d; ++i)
            if (b[i] == b[i + 1]) distinct = false;
        if (!distinct) continue;
        Partition m;
        for (int i = 0; i < d; ++i)
            if (b[i] - (d - 1 - i) > 0) m.push_back(b[i] - (d - 1 - i));
        zadd(out[m], c, sign, 0);
    }
    for (auto it = out.begin(); it != out.end();) {
        bool zero = std::all_of(it->second.begin(), it->second.end(), [](int64_t x) { return x == 0; });
        it = zero ? out.erase(it) : std::next(it);
    }
    return cache[la] = std::move(out);
}

// Schur coordinates of P_la(t)
std::vector<Rational> hl_p_schur(const Partition& la, const Rational& t) {
    const int d = part_size(la);
    const auto& num = hl_numerator(la);
    auto m = multiplicities(la);
    Rational v = qfactorial(d - int(la.size()), t);
    for (size_t i = 1; i < m.size(); ++i) v *= qfactorial(m[i], t);
    std::vector<Rational> out(partitions_of(d).size(), 0);
    for (auto& [mu, c] : num) {
        Rational val = 0, tp = 1;
        for (int64_t x : c) {
            if (x) val += Rational(mpz_class(std::to_string(x))) * tp;
            tp *= t;
        }
        out[index_of(d, mu)] = val / v;
    }
    return out;
}

std::string tkey(const Rational& t) { return t.get_str(); }

std::vector<Rational> to_vec(const SymElement& f) {
    std::vector<Rational> v(partitions_of(f.degree).size(), 0);
    for (auto& [la, c] : f.coeffs) v[index_of(f.degree, la)] = c;
    return v;
}

SymElement from_vec(int d, int n, Basis b, const Rational& t, const std::vector<Rational>& v) {
    SymElement f;
    f.degree = d;
    f.nvars = n;
    f.basis = b;
    f.t = t;
    const auto& P = partitions_of(d);
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) f.coeffs[P[i]] = v[i];
    return f;
}

bool uses_t(Basis b) { return b == Basis::ptilde || b == Basis::hhat; }

struct MatCache {
    std::mutex mu;
    std::map<std::tuple<int, int, std::string>, Mat> fwd, inv;
};
MatCache& mat_cache() {
    static MatCache c;
    return c;
}

Mat build_matrix(int d, Basis from, const Rational& t) {
    const auto& P = partitions_of(d);
    const int n = int(P.size());
    Mat M(n, std::vector<Rational>(n, 0));
    for (int j = 0; j < n; ++j) {
        std::vector<Rational> col(n, 0);
        switch (from) {
            case Basis::monomial: col[j] = 1; break;
            case Basis::powersum:
                for (int i = 0; i < n; ++i) col[i] = power_monomial_coeff(P[j], P[i]);
                break;
            case Basis::schur:
                for (int i = 0; i < n; ++i) col[i] = kostka(P[j], P[i]);
                break;
            case Basis::ptilde: col = to_vec(hl_ptilde(P[j], d, t)); break;
            case Basis::hhat: col = to_vec(hl_modified(P[j], d, t)); break;
        }
        for (int i = 0; i < n; ++i) M[i][j] = col[i];
    }
    return M;
}

const Mat& from_monomial_matrix(int d, Basis to, const Rational& t) {
    const auto& M = to_monomial_matrix(d, to, t);
    auto& C = mat_cache();
    auto key = std::make_tuple(d, int(to), uses_t(to) ? tkey(t) : std::string());
    {
        std::lock_guard<std::mutex> lock(C.mu);
        if (auto it = C.inv.find(key); it != C.inv.end()) return it->second;
    }
    Mat I = invert(M);
    std::lock_guard<std::mutex> lock(C.mu);
    return C.inv.emplace(key, std::move(I)).first->second;
}

std::vector<Rational> to_powersum_vec(const SymElement& f) {
    return to_vec(convert(f, Basis::powersum));
}

}  // namespace

// ---- partitions ----------------------------------------------------------------------------

const std::vector<Partition>& partitions_of(int d) {
    check_degree(d);
    static std::mutex mu;
    static std::map<int, std::vector<Partition>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(d); it != cache.end()) return it->second;
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int left, int maxp) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int x = std::min(left, maxp); x >= 1; --x) {
            cur.push_back(x);
            rec(left - x, x);
            cur.pop_back();
        }
    };
    rec(d, d);
    return cache[d] = out;
}

int part_size(const Partition& la) {
    int s = 0;
    for (int x : la) s += x;
    return s;
}

Partition transpose(const Partition& la) {
    Partition t;
    if (la.empty()) return t;
    for (int j = 1; j <= la[0]; ++j) {
        int c = 0;
        for (int x : la)
            if (x >= j) ++c;
        t.push_back(c);
    }
    return t;
}

int n_of(const Partition& la) {
    int s = 0;
    for (size_t i = 0; i < la.size(); ++i) s += int(i) * la[i];
    return s;
}

std::vector<int> multiplicities(const Partition& la) {
    std::vector<int> m(la.empty() ? 1 : la[0] + 1, 0);
    for (int x : la) ++m[x];
    return m;
}

Rational z_of(const Partition& la) {
    auto m = multiplicities(la);
    mpz_class z = 1;
    for (size_t i = 1; i < m.size(); ++i)
        for (int k = 1; k <= m[i]; ++k) z *= mpz_class(int(i)) * k;
    return Rational(z);
}

std::string format_partition(const Partition& la) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < la.size(); ++i) os << (i ? "," : "") << la[i];
    os << ']';
    return os.str();
}

Partition parse_partition_list(const std::string& s) {
    std::string body = s;
    if (!body.empty() && body.front() == '[') {
        if (body.back() != ']') throw std::invalid_argument("bad partition: " + s);
        body = body.substr(1, body.size() - 2);
    }
    Partition la;
    if (body.empty()) return la;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        int x = 0;
        try {
            x = std::stoi(tok, &pos);
        } catch (...) {
            throw std::invalid_argument("bad partition: " + s);
        }
        if (pos != tok.size() || x <= 0) throw std::invalid_argument("bad partition: " + s);
        la.push_back(x);
    }
    if (!std::is_sorted(la.rbegin(), la.rend())) throw std::invalid_argument("parts must be non-increasing: " + s);
    return la;
}

const char* basis_name(Basis b) {
    switch (b) {
        case Basis::monomial: return "monomial";
        case Basis::powersum: return "powersum";
        case Basis::schur: return "schur";
        case Basis::ptilde: return "ptilde";
        case Basis::hhat: return "hhat";
    }
    return "?";
}

// ---- transitions ---------------------------------------------------------------------------

const Mat& to_monomial_matrix(int d, Basis from, const Rational& t) {
    check_degree(d);
    auto& C = mat_cache();
    auto key = std::make_tuple(d, int(from), uses_t(from) ? tkey(t) : std::string());
    {
        std::lock_guard<std::mutex> lock(C.mu);
        if (auto it = C.fwd.find(key); it != C.fwd.end()) return it->second;
    }
    Mat M = build_matrix(d, from, t);
    std::lock_guard<std::mutex> lock(C.mu);
    return C.fwd.emplace(key, std::move(M)).first->second;
}

SymElement convert(const SymElement& f, Basis target, const Rational& t) {
    if (f.basis == target && (!uses_t(target) || f.t == t)) return f;
    auto mono = mat_apply(to_monomial_matrix(f.degree, f.basis, f.t), to_vec(f));
    auto out = target == Basis::monomial ? mono : mat_apply(from_monomial_matrix(f.degree, target, t), mono);
    return from_vec(f.degree, f.nvars, target, uses_t(target) ? t : Rational(0), out);
}

SymElement operator+(const SymElement& a, const SymElement& b) {
    if (a.degree != b.degree) throw std::invalid_argument("adding symmetric functions of different degree");
    SymElement bb = convert(b, a.basis, a.t);
    SymElement r = a;
    r.nvars = std::max(a.nvars, b.nvars);
    for (auto& [la, c] : bb.coeffs) r.coeffs[la] += c;
    for (auto it = r.coeffs.begin(); it != r.coeffs.end();) it = it->second == 0 ? r.coeffs.erase(it) : std::next(it);
    return r;
}

SymElement operator*(const Rational& c, const SymElement& a) {
    SymElement r = a;
    r.coeffs.clear();
    if (c == 0) return r;
    for (auto& [la, x] : a.coeffs) r.coeffs[la] = c * x;
    return r;
}

bool equal(const SymElement& a, const SymElement& b) {
    if (a.degree != b.degree) return false;
    return convert(a, Basis::monomial).coeffs == convert(b, Basis::monomial).coeffs;
}

SymElement multiply(const SymElement& a, const SymElement& b) {
    auto pa = convert(a, Basis::powersum), pb = convert(b, Basis::powersum);
    SymElement r;
    r.degree = a.degree + b.degree;
    check_degree(r.degree);
    r.nvars = std::max(a.nvars, b.nvars);
    r.basis = Basis::powersum;
    for (auto& [la, x] : pa.coeffs)
        for (auto& [mu, y] : pb.coeffs) {
            Partition nu = la;
            nu.insert(nu.end(), mu.begin(), mu.end());
            std::sort(nu.rbegin(), nu.rend());
            r.coeffs[nu] += x * y;
        }
    return convert(r, Basis::monomial);
}

// ---- basis elements ------------------------------------------------------------------------

namespace {
SymElement unit(const Partition& la, int n, Basis b) {
    SymElement f;
    f.degree = part_size(la);
    check_degree(f.degree);
    index_of(f.degree, la);
    f.nvars = n;
    f.basis = b;
    f.coeffs[la] = 1;
    return convert(f, Basis::monomial);
}
}  // namespace

SymElement monomial_sym(const Partition& la, int n) { return unit(la, n, Basis::monomial); }
SymElement power_sym(const Partition& rho, int n) { return unit(rho, n, Basis::powersum); }
SymElement schur_sym(const Partition& la, int n) { return unit(la, n, Basis::schur); }
SymElement complete_sym(int d, int n) {
    SymElement f;
    f.degree = d;
    f.nvars = n;
    for (auto& la : partitions_of(d)) f.coeffs[la] = 1;
    return f;
}

// ---- Hall-Littlewood ------------------------------------------------------------------------

SymElement hl_p(const Partition& la, int n, const Rational& t) {
    const int d = part_size(la);
    check_degree(d);
    if (n < int(la.size())) throw std::invalid_argument("hl_p needs at least l(la) variables");
    auto s = hl_p_schur(la, t);
    auto mono = mat_apply(to_monomial_matrix(d, Basis::schur), s);
    return from_vec(d, n, Basis::monomial, 0, mono);
}

SymElement hl_q(const Partition& la, int n, const Rational& t) {
    auto m = multiplicities(la);
    Rational b = 1;
    for (size_t i = 1; i < m.size(); ++i) b *= rpow(1 - t, m[i]) * qfactorial(m[i], t);
    return b * hl_p(la, n, t);
}

SymElement hl_h(const Partition& la, int n, const Rational& t) {
    auto p = convert(hl_q(la, n, t), Basis::powersum);
    for (auto& [rho, c] : p.coeffs)
        for (int r : rho) {
            Rational den = 1 - rpow(t, r);
            if (den == 0) throw std::domain_error("transformed Hall-Littlewood function undefined at this t");
            c /= den;
        }
    return convert(p, Basis::monomial);
}

SymElement hl_modified(const Partition& mu, int n, const Rational& t) {
    if (t == 0) throw std::domain_error("modified Hall-Littlewood function needs t != 0");
    return rpow(t, n_of(mu)) * hl_h(mu, n, 1 / t);
}

SymElement hl_ptilde(const Partition& la, int n, const Rational& t) {
    if (t == 0) throw std::domain_error("ptilde needs t != 0");
    return (1 / rpow(t, n_of(la))) * hl_p(la, n, 1 / t);
}

SymElement hl_modified_flag_count(const Partition& mu, int n, int a, int p, int f) {
    const int b = part_size(mu);
    check_degree(b);
    FieldTower T(p, f, a);
    const int Q = int(T.size(a));
    int64_t total = 1;
    for (int i = 0; i < b; ++i) {
        total *= Q;
        if (total > (1 << 20)) throw std::length_error("flag count too large");
    }
    const int N = int(total);
    // field tables by code
    std::vector<int> fadd(Q * Q), fmul(Q * Q);
    for (int x = 0; x < Q; ++x)
        for (int y = 0; y < Q; ++y) {
            Elem ex = T.from_code(a, x), ey = T.from_code(a, y);
            fadd[x * Q + y] = int(T.code(T.add(ex, ey)));
            fmul[x * Q + y] = int(T.code(T.mul(ex, ey)));
        }
    auto digits = [&](int v) {
        std::vector<int> d(b);
        for (int i = 0; i < b; ++i) {
            d[i] = v % Q;
            v /= Q;
        }
        return d;
    };
    auto encode = [&](const std::vector<int>& d) {
        int v = 0;
        for (int i = b - 1; i >= 0; --i) v = v * Q + d[i];
        return v;
    };
    std::vector<int> vadd(size_t(N) * N);
    for (int u = 0; u < N; ++u) {
        auto du = digits(u);
        for (int v = 0; v < N; ++v) {
            auto dv = digits(v), dw = du;
            for (int i = 0; i < b; ++i) dw[i] = fadd[du[i] * Q + dv[i]];
            vadd[size_t(u) * N + v] = encode(dw);
        }
    }
    auto scale = [&](int c, int v) {
        auto d = digits(v);
        for (auto& x : d) x = fmul[c * Q + x];
        return encode(d);
    };
    // unipotent Jordan matrix: J e_i = e_i + e_{i-1} inside each block
    std::vector<int> block_start(b);
    for (int i = 0, s = 0; i < int(mu.size()); s += mu[i], ++i)
        for (int k = 0; k < mu[i]; ++k) block_start[s + k] = s;
    auto apply_J = [&](int v) {
        auto d = digits(v), out = d;
        for (int i = 0; i < b; ++i)
            if (i > block_start[i]) out[i - 1] = fadd[out[i - 1] * Q + d[i]];
        return encode(out);
    };

    using Sub = std::vector<bool>;
    std::map<Sub, int> seen;
    std::vector<Sub> subs;
    std::vector<int> dims;
    Sub zero(N, false);
    zero[0] = true;
    seen[zero] = 0;
    subs.push_back(zero);
    dims.push_back(0);
    for (size_t k = 0; k < subs.size(); ++k) {
        Sub W = subs[k];
        for (int v = 1; v < N; ++v) {
            if (W[v]) continue;
            Sub S = W;
            for (int w = 0; w < N; ++w)
                if (W[w])
                    for (int c = 1; c < Q; ++c) S[vadd[size_t(w) * N + scale(c, v)]] = true;
            if (seen.count(S)) continue;
            seen[S] = int(subs.size());
            subs.push_back(S);
            dims.push_back(dims[k] + 1);
        }
    }
    std::vector<int> inv;
    for (size_t k = 0; k < subs.size(); ++k) {
        bool ok = true;
        for (int v = 0; v < N && ok; ++v)
            if (subs[k][v] && !subs[k][apply_J(v)]) ok = false;
        if (ok) inv.push_back(int(k));
    }
    auto contains = [&](int big, int small) {
        for (int v = 0; v < N; ++v)
            if (subs[small][v] && !subs[big][v]) return false;
        return true;
    };
    SymElement out;
    out.degree = b;
    out.nvars = n;
    for (const auto& la : partitions_of(b)) {
        if (int(la.size()) > n) continue;
        // chains 0 = V_0 <= V_1 <= ... with dim V_i = la_1 + ... + la_i
        std::map<int, mpz_class> cur{{0, 1}};
        int dim = 0;
        for (int part : la) {
            dim += part;
            std::map<int, mpz_class> nxt;
            for (int k : inv)
                if (dims[k] == dim)
                    for (auto& [s, c] : cur)
                        if (contains(k, s)) nxt[k] += c;
            cur.swap(nxt);
        }
        mpz_class c = 0;
        for (auto& [k, x] : cur) c += x;
        if (c != 0) out.coeffs[la] = Rational(c);
    }
    return out;
}

// ---- inner product, evaluation, polynomials ------------------------------------------------

Rational hall_inner(const SymElement& f, const SymElement& g) {
    if (f.degree != g.degree) return 0;
    auto a = to_powersum_vec(f), b = to_powersum_vec(g);
    const auto& P = partitions_of(f.degree);
    Rational s = 0;
    for (size_t i = 0; i < P.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += z_of(P[i]) * a[i] * b[i];
    return s;
}

std::complex<double> evaluate(const SymElement& f, const std::vector<std::complex<double>>& x) {
    auto pf = convert(f, Basis::powersum);
    std::vector<std::complex<double>> pk(f.degree + 1, 0.0);
    for (int k = 1; k <= f.degree; ++k)
        for (auto xi : x) pk[k] += std::pow(xi, k);
    std::complex<double> s = 0;
    for (auto& [rho, c] : pf.coeffs) {
        std::complex<double> term = c.get_d();
        for (int r : rho) term *= pk[r];
        s += term;
    }
    return s;
}

MPoly to_polynomial(const SymElement& f, int n) {
    auto m = convert(f, Basis::monomial);
    MPoly out;
    for (auto& [la, c] : m.coeffs) {
        if (int(la.size()) > n) continue;
        std::vector<int> e(n, 0);
        for (size_t i = 0; i < la.size(); ++i) e[i] = la[i];
        std::sort(e.begin(), e.end());
        do {
            out[e] += c;
        } while (std::next_permutation(e.begin(), e.end()));
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

MPoly poly_mul(const MPoly& a, const MPoly& b) {
    MPoly out;
    for (auto& [ea, ca] : a)
        for (auto& [eb, cb] : b) {
            std::vector<int> e(std::max(ea.size(), eb.size()), 0);
            for (size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
            for (size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
            out[e] += ca * cb;
        }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

MPoly poly_add(const MPoly& a, const MPoly& b) {
    MPoly out = a;
    for (auto& [e, c] : b) out[e] += c;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

}  // namespace exo
