#include "exotic/glq.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "exotic/etale.hpp"

namespace exo {

MatrixGL zero_matrix(const FieldTower& T, int n, int level) {
    return {level, n, std::vector<Elem>(size_t(n) * n, T.zero(level))};
}

MatrixGL identity_matrix(const FieldTower& T, int n, int level) {
    auto M = zero_matrix(T, n, level);
    for (int i = 0; i < n; ++i) M(i, i) = T.one(level);
    return M;
}

MatrixGL scalar_matrix(const FieldTower& T, int n, const Elem& x) {
    auto M = zero_matrix(T, n, x.level);
    for (int i = 0; i < n; ++i) M(i, i) = x;
    return M;
}

MatrixGL mat_mul(const FieldTower& T, const MatrixGL& A, const MatrixGL& B) {
    if (A.n != B.n || A.level != B.level) throw FieldError("matrix shape or level mismatch");
    const int n = A.n;
    auto C = zero_matrix(T, n, A.level);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Elem& x = A(i, k);
            if (x.is_zero()) continue;
            for (int j = 0; j < n; ++j) C(i, j) = T.add(C(i, j), T.mul(x, B(k, j)));
        }
    return C;
}

MatrixGL mat_add(const FieldTower& T, const MatrixGL& A, const MatrixGL& B) {
    if (A.n != B.n || A.level != B.level) throw FieldError("matrix shape or level mismatch");
    auto C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = T.add(A.a[i], B.a[i]);
    return C;
}

MatrixGL mat_neg(const FieldTower& T, const MatrixGL& A) {
    auto C = A;
    for (auto& x : C.a) x = T.neg(x);
    return C;
}

MatrixGL mat_inv(const FieldTower& T, const MatrixGL& A) {
    const int n = A.n;
    auto M = A;
    auto R = identity_matrix(T, n, A.level);
    for (int c = 0; c < n; ++c) {
        int piv = c;
        while (piv < n && M(piv, c).is_zero()) ++piv;
        if (piv == n) throw FieldError("matrix is singular");
        if (piv != c)
            for (int j = 0; j < n; ++j) {
                std::swap(M(piv, j), M(c, j));
                std::swap(R(piv, j), R(c, j));
            }
        Elem s = T.inv(M(c, c));
        for (int j = 0; j < n; ++j) {
            M(c, j) = T.mul(M(c, j), s);
            R(c, j) = T.mul(R(c, j), s);
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || M(i, c).is_zero()) continue;
            Elem u = T.neg(M(i, c));
            for (int j = 0; j < n; ++j) {
                M(i, j) = T.add(M(i, j), T.mul(u, M(c, j)));
                R(i, j) = T.add(R(i, j), T.mul(u, R(c, j)));
            }
        }
    }
    return R;
}

MatrixGL mat_embed(const FieldTower& T, const MatrixGL& A, int level) {
    MatrixGL B{level, A.n, {}};
    B.a.reserve(A.a.size());
    for (auto& x : A.a) B.a.push_back(T.embed(x, level));
    return B;
}

MatrixGL mat_frobenius(const FieldTower& T, const MatrixGL& A, int64_t j) {
    auto B = A;
    for (auto& x : B.a) x = T.frobenius(x, j);
    return B;
}

MatrixGL block_diag(const FieldTower& T, const std::vector<MatrixGL>& blocks) {
    int n = 0, level = blocks.empty() ? 1 : blocks[0].level;
    for (auto& b : blocks) n += b.n;
    auto M = zero_matrix(T, n, level);
    int off = 0;
    for (auto& b : blocks) {
        if (b.level != level) throw FieldError("block level mismatch");
        for (int i = 0; i < b.n; ++i)
            for (int j = 0; j < b.n; ++j) M(off + i, off + j) = b(i, j);
        off += b.n;
    }
    return M;
}

namespace {

// row echelon in place; returns rank and the determinant
std::pair<int, Elem> eliminate(const FieldTower& T, MatrixGL M) {
    const int n = M.n;
    int r = 0;
    Elem d = T.one(M.level);
    for (int c = 0; c < n && r < n; ++c) {
        int piv = r;
        while (piv < n && M(piv, c).is_zero()) ++piv;
        if (piv == n) {
            d = T.zero(M.level);
            continue;
        }
        if (piv != r) {
            for (int j = c; j < n; ++j) std::swap(M(piv, j), M(r, j));
            d = T.neg(d);
        }
        d = T.mul(d, M(r, c));
        Elem s = T.inv(M(r, c));
        for (int i = r + 1; i < n; ++i) {
            if (M(i, c).is_zero()) continue;
            Elem u = T.neg(T.mul(M(i, c), s));
            for (int j = c; j < n; ++j) M(i, j) = T.add(M(i, j), T.mul(u, M(r, j)));
        }
        ++r;
    }
    if (r < n) d = T.zero(M.level);
    return {r, d};
}

int poly_deg(const FPoly& f) {
    int d = int(f.size()) - 1;
    while (d >= 0 && f[d].is_zero()) --d;
    return d;
}

// exact division attempt; returns true and the quotient if g | f (g monic)
bool divide(const FieldTower& T, const FPoly& f, const FPoly& g, FPoly& quot) {
    const int df = poly_deg(f), dg = poly_deg(g);
    if (df < dg) return false;
    FPoly r(f.begin(), f.begin() + df + 1);
    quot.assign(size_t(df - dg + 1), T.zero(f[0].level));
    for (int i = df; i >= dg; --i) {
        Elem c = r[i];
        if (c.is_zero()) continue;
        quot[i - dg] = c;
        Elem u = T.neg(c);
        for (int j = 0; j <= dg; ++j) r[i - dg + j] = T.add(r[i - dg + j], T.mul(u, g[j]));
    }
    for (int i = 0; i < dg; ++i)
        if (!r[i].is_zero()) return false;
    return true;
}

struct IrrEntry {
    Orbit orbit;
    FPoly poly;  // over F_q
};

struct OrbitCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, std::vector<Orbit>> orbits;
    std::map<std::tuple<int, int, int>, std::vector<IrrEntry>> irr;
};

OrbitCache& orbit_cache() {
    static OrbitCache c;
    return c;
}

const std::vector<IrrEntry>& irreducibles(const FieldTower& T, int a) {
    auto& C = orbit_cache();
    auto key = std::make_tuple(T.p(), T.f(), a);
    {
        std::lock_guard<std::mutex> g(C.mu);
        auto it = C.irr.find(key);
        if (it != C.irr.end()) return it->second;
    }
    std::vector<IrrEntry> out;
    for (auto& o : orbits_of_degree(T, a)) out.push_back({o, min_poly(T, o)});
    std::lock_guard<std::mutex> g(C.mu);
    return C.irr.emplace(key, std::move(out)).first->second;
}

MatrixGL poly_at(const FieldTower& T, const FPoly& f, const MatrixGL& A) {
    auto R = zero_matrix(T, A.n, A.level);
    for (int i = int(f.size()) - 1; i >= 0; --i) {
        R = mat_mul(T, R, A);
        Elem c = T.embed(f[i], A.level);
        for (int d = 0; d < A.n; ++d) R(d, d) = T.add(R(d, d), c);
    }
    return R;
}

}  // namespace

Elem det(const FieldTower& T, const MatrixGL& A) { return eliminate(T, A).second; }

Elem mat_trace(const FieldTower& T, const MatrixGL& A) {
    Elem s = T.zero(A.level);
    for (int i = 0; i < A.n; ++i) s = T.add(s, A(i, i));
    return s;
}

int rank(const FieldTower& T, const MatrixGL& A) { return eliminate(T, A).first; }

bool is_invertible(const FieldTower& T, const MatrixGL& A) { return rank(T, A) == A.n; }

// Reduction to Hessenberg form by similarity, then the usual three-term style recurrence.
FPoly charpoly(const FieldTower& T, const MatrixGL& A) {
    const int n = A.n, L = A.level;
    auto H = A;
    for (int m = 1; m + 1 < n; ++m) {
        int i = m;
        while (i < n && H(i, m - 1).is_zero()) ++i;
        if (i == n) continue;
        if (i != m) {
            for (int j = 0; j < n; ++j) std::swap(H(i, j), H(m, j));
            for (int j = 0; j < n; ++j) std::swap(H(j, i), H(j, m));
        }
        Elem tinv = T.inv(H(m, m - 1));
        for (int r = m + 1; r < n; ++r) {
            if (H(r, m - 1).is_zero()) continue;
            Elem u = T.mul(H(r, m - 1), tinv);
            Elem nu = T.neg(u);
            for (int j = 0; j < n; ++j) H(r, j) = T.add(H(r, j), T.mul(nu, H(m, j)));
            for (int j = 0; j < n; ++j) H(j, m) = T.add(H(j, m), T.mul(u, H(j, r)));
        }
    }
    std::vector<FPoly> p(n + 1);
    p[0] = {T.one(L)};
    for (int m = 1; m <= n; ++m) {
        FPoly cur(m + 1, T.zero(L));
        // (x - h_mm) p_{m-1}
        Elem nh = T.neg(H(m - 1, m - 1));
        for (int d = 0; d < m; ++d) {
            cur[d + 1] = T.add(cur[d + 1], p[m - 1][d]);
            cur[d] = T.add(cur[d], T.mul(nh, p[m - 1][d]));
        }
        Elem t = T.one(L);
        for (int i = 1; i < m; ++i) {
            t = T.mul(t, H(m - i, m - i - 1));
            if (t.is_zero()) break;
            Elem c = T.neg(T.mul(t, H(m - i - 1, m - 1)));
            if (c.is_zero()) continue;
            for (size_t d = 0; d < p[m - i - 1].size(); ++d) cur[d] = T.add(cur[d], T.mul(c, p[m - i - 1][d]));
        }
        p[m] = std::move(cur);
    }
    return p[n];
}

std::vector<Orbit> orbits_of_degree(const FieldTower& T, int a) {
    auto& C = orbit_cache();
    auto key = std::make_tuple(T.p(), T.f(), a);
    {
        std::lock_guard<std::mutex> g(C.mu);
        auto it = C.orbits.find(key);
        if (it != C.orbits.end()) return it->second;
    }
    std::vector<Orbit> out;
    const int64_t N = T.units(a);
    for (int64_t t = 0; t < N; ++t) {
        Elem x = T.from_log(a, t);
        if (T.degree(x) != a) continue;
        bool least = true;
        for (int j = 1; j < a && least; ++j) least = T.frobenius(x, j).log() > t;
        if (least) out.push_back({a, t});
    }
    std::lock_guard<std::mutex> g(C.mu);
    return C.orbits.emplace(key, std::move(out)).first->second;
}

Orbit orbit_of(const FieldTower& T, const Elem& xi) {
    int a = T.degree(xi);
    return {a, T.orbit_min_log(xi)};
}

Elem orbit_element(const FieldTower& T, const Orbit& o) { return T.from_log(o.a, o.j); }

FPoly min_poly(const FieldTower& T, const Orbit& o) {
    Elem xi = orbit_element(T, o);
    FPoly f{T.one(o.a)};
    for (int i = 0; i < o.a; ++i) {
        Elem r = T.neg(T.frobenius(xi, i));
        FPoly g(f.size() + 1, T.zero(o.a));
        for (size_t d = 0; d < f.size(); ++d) {
            g[d + 1] = T.add(g[d + 1], f[d]);
            g[d] = T.add(g[d], T.mul(r, f[d]));
        }
        f = std::move(g);
    }
    for (auto& c : f) c = T.descend(c, 1);
    return f;
}

MatrixGL companion(const FieldTower& T, const FPoly& f) {
    const int d = poly_deg(f);
    const int L = f[0].level;
    auto M = zero_matrix(T, d, L);
    for (int i = 1; i < d; ++i) M(i, i - 1) = T.one(L);
    for (int i = 0; i < d; ++i) M(i, d - 1) = T.neg(f[i]);
    return M;
}

int ClassLabel::n() const {
    int s = 0;
    for (auto& b : blocks) s += b.orbit.a * part_size(b.mu);
    return s;
}

ClassLabel canonical(ClassLabel c) {
    std::sort(c.blocks.begin(), c.blocks.end());
    return c;
}

std::string format_class(const ClassLabel& c) {
    std::string s;
    for (auto& b : canonical(c).blocks) {
        if (!s.empty()) s += ';';
        s += std::to_string(b.orbit.a) + ":" + std::to_string(b.orbit.j) + ":" + format_partition(b.mu);
    }
    return s;
}

ClassLabel parse_class(const FieldTower& T, const std::string& s) {
    ClassLabel c;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        auto p1 = item.find(':');
        auto p2 = p1 == std::string::npos ? p1 : item.find(':', p1 + 1);
        if (p2 == std::string::npos) throw std::invalid_argument("class block '" + item + "' is not a:j:[parts]");
        int a;
        int64_t j;
        try {
            a = std::stoi(item.substr(0, p1));
            j = std::stoll(item.substr(p1 + 1, p2 - p1 - 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("class block '" + item + "' is not a:j:[parts]");
        }
        if (a < 1 || !T.has_level(a)) throw std::invalid_argument("degree " + std::to_string(a) + " unavailable");
        Elem xi = T.from_log(a, j);
        if (T.degree(xi) != a)
            throw std::invalid_argument("g_" + std::to_string(a) + "^" + std::to_string(j) + " has degree " +
                                        std::to_string(T.degree(xi)) + ", not " + std::to_string(a));
        Partition mu = parse_partition_list(item.substr(p2 + 1));
        if (mu.empty()) throw std::invalid_argument("empty partition in class block '" + item + "'");
        c.blocks.push_back({orbit_of(T, xi), mu});
    }
    c = canonical(c);
    for (size_t i = 1; i < c.blocks.size(); ++i)
        if (c.blocks[i].orbit == c.blocks[i - 1].orbit) throw std::invalid_argument("repeated orbit in class spec");
    return c;
}

std::vector<ClassLabel> enumerate_classes(const FieldTower& T, int n) {
    std::vector<Orbit> orbits;
    for (int a = 1; a <= n; ++a)
        for (auto& o : orbits_of_degree(T, a)) orbits.push_back(o);
    std::vector<ClassLabel> out;
    ClassLabel cur;
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        if (i == orbits.size()) return;
        rec(i + 1, left);
        const int a = orbits[i].a;
        for (int b = 1; a * b <= left; ++b)
            for (auto& mu : partitions_of(b)) {
                cur.blocks.push_back({orbits[i], mu});
                rec(i + 1, left - a * b);
                cur.blocks.pop_back();
            }
    };
    rec(0, n);
    for (auto& c : out) c = canonical(c);
    std::sort(out.begin(), out.end());
    return out;
}

MatrixGL class_representative(const FieldTower& T, const ClassLabel& c) {
    std::vector<MatrixGL> blocks;
    for (auto& b : c.blocks) {
        auto h = companion(T, min_poly(T, b.orbit));
        const int d = h.n;
        for (int part : b.mu) {
            auto J = zero_matrix(T, d * part, 1);
            for (int r = 0; r < part; ++r)
                for (int i = 0; i < d; ++i) {
                    for (int j = 0; j < d; ++j) J(r * d + i, r * d + j) = h(i, j);
                    if (r + 1 < part) J(r * d + i, (r + 1) * d + i) = T.one(1);
                }
            blocks.push_back(J);
        }
    }
    if (blocks.empty()) return zero_matrix(T, 0, 1);
    return block_diag(T, blocks);
}

ClassLabel identify_class(const FieldTower& T, const MatrixGL& A) {
    FPoly cp = charpoly(T, A);
    for (auto& c : cp) {
        if (!T.in_subfield(c, 1)) throw FieldError("characteristic polynomial is not defined over F_q");
        c = T.descend(c, 1);
    }
    if (A.n > 0 && cp[0].is_zero()) throw FieldError("matrix is singular");
    ClassLabel out;
    FPoly quot;
    for (int a = 1; a <= A.n && poly_deg(cp) > 0; ++a) {
        for (auto& irr : irreducibles(T, a)) {
            if (poly_deg(cp) < a) break;
            int e = 0;
            while (divide(T, cp, irr.poly, quot)) {
                cp = quot;
                ++e;
            }
            if (e == 0) continue;
            Partition mu;
            if (e == 1) {
                mu = {1};
            } else {
                auto B = poly_at(T, irr.poly, A);
                auto P = identity_matrix(T, A.n, A.level);
                Partition conj;
                int prev = 0;
                while (prev < a * e) {
                    P = mat_mul(T, P, B);
                    int nul = A.n - rank(T, P);
                    conj.push_back((nul - prev) / a);
                    prev = nul;
                }
                mu = transpose(conj);
            }
            out.blocks.push_back({irr.orbit, mu});
            if (poly_deg(cp) == 0) break;
        }
    }
    return canonical(out);
}

bool is_regular_class(const ClassLabel& c) {
    for (auto& b : c.blocks)
        if (b.mu.size() != 1) return false;
    return true;
}

Elem class_det(const FieldTower& T, const ClassLabel& c) {
    Elem d = T.one(1);
    for (auto& b : c.blocks) d = T.mul(d, T.pow(T.norm(orbit_element(T, b.orbit), 1), part_size(b.mu)));
    return d;
}

Elem class_trace(const FieldTower& T, const ClassLabel& c) {
    Elem s = T.zero(1);
    for (auto& b : c.blocks)
        s = T.add(s, T.mul(T.from_int(1, part_size(b.mu)), T.trace(orbit_element(T, b.orbit), 1)));
    return s;
}

namespace {

int64_t checked_mul(int64_t a, int64_t b) {
    __int128 r = __int128(a) * b;
    if (r > INT64_MAX || r < INT64_MIN) throw std::overflow_error("group order exceeds 63 bits");
    return int64_t(r);
}

int64_t checked_pow(int64_t b, int e) {
    int64_t r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, b);
    return r;
}

}  // namespace

int64_t gl_order(int64_t Q, int n) {
    int64_t Qn = checked_pow(Q, n), r = 1, Qi = 1;
    for (int i = 0; i < n; ++i) {
        r = checked_mul(r, Qn - Qi);
        Qi *= Q;
    }
    return r;
}

double gl_cardinality(int64_t Q, int n) {
    double Qn = std::pow(double(Q), n), r = 1, Qi = 1;
    for (int i = 0; i < n; ++i) {
        r *= Qn - Qi;
        Qi *= double(Q);
    }
    return r;
}

// Q^{sum mu'_i^2 - sum m_i(m_i+1)/2} prod_i prod_{j <= m_i} (Q^j - 1) per block, Q = q^a
int64_t centralizer_order(int64_t q, const ClassLabel& c) {
    int64_t r = 1;
    for (auto& b : c.blocks) {
        const int64_t Q = checked_pow(q, b.orbit.a);
        int e = 0;
        for (int x : transpose(b.mu)) e += x * x;
        auto m = multiplicities(b.mu);
        for (size_t i = 1; i < m.size(); ++i) {
            e -= m[i] * (m[i] + 1) / 2;
            for (int j = 1; j <= m[i]; ++j) r = checked_mul(r, checked_pow(Q, j) - 1);
        }
        r = checked_mul(r, checked_pow(Q, e));
    }
    return r;
}

int64_t class_size(int64_t q, const ClassLabel& c) { return gl_order(q, c.n()) / centralizer_order(q, c); }

MatrixGL shintani_norm(const FieldTower& T, const MatrixGL& h) {
    auto N = h;
    for (int i = 1; i < h.level; ++i) N = mat_mul(T, mat_frobenius(T, h, i), N);
    return N;
}

ClassLabel shintani_norm_class(const FieldTower& T, const MatrixGL& h) {
    return identify_class(T, shintani_norm(T, h));
}

void for_each_matrix(const FieldTower& T, int n, int m, const std::function<void(const MatrixGL&)>& fn) {
    const int64_t Q = T.size(m);
    std::vector<Elem> elems;
    for (int64_t c = 0; c < Q; ++c) elems.push_back(T.from_code(m, c));
    std::vector<int64_t> idx(size_t(n) * n, 0);
    auto M = zero_matrix(T, n, m);
    while (true) {
        fn(M);
        size_t i = 0;
        while (i < idx.size()) {
            if (++idx[i] < Q) {
                M.a[i] = elems[idx[i]];
                break;
            }
            idx[i] = 0;
            M.a[i] = elems[0];
            ++i;
        }
        if (i == idx.size()) return;
    }
}

void for_each_gl(const FieldTower& T, int n, int m, int64_t budget, const std::function<void(const MatrixGL&)>& fn) {
    const double card = gl_cardinality(T.size(m), n);
    if (card > double(budget))
        throw BudgetError("GL_" + std::to_string(n) + "(F_" + std::to_string(T.size(m)) + ") has " +
                              std::to_string(int64_t(card)) + " elements, budget " + std::to_string(budget),
                          card);
    for_each_matrix(T, n, m, [&](const MatrixGL& M) {
        if (is_invertible(T, M)) fn(M);
    });
}

}  // namespace exo
