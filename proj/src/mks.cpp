#include "exotic/mks.hpp"

#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>

namespace exo {

const char* path_name(MksPath p) {
    switch (p) {
        case MksPath::brute: return "brute";
        case MksPath::conv: return "conv";
        case MksPath::hl: return "hl";
    }
    return "?";
}

MksPath parse_path(const std::string& s) {
    if (s == "brute") return MksPath::brute;
    if (s == "conv") return MksPath::conv;
    if (s == "hl") return MksPath::hl;
    throw std::invalid_argument("unknown path '" + s + "' (brute, conv, hl)");
}

std::vector<int> mks_levels(const std::vector<int>& lambda, int c) {
    std::set<int> lv;
    for (int M = 1; M <= c; ++M) {
        lv.insert(M);
        for (int l : kloosterman_levels(lambda, M)) lv.insert(l);
    }
    for (int k : lambda) lv.insert(k);
    return {lv.begin(), lv.end()};
}

double mks_scale(int64_t q, int k, int c) { return std::pow(double(q), 0.5 * (k - 1) * c * c); }

ClassFunction mks_bruteforce_function(const FieldTower& T, const MultChar& chi, int c, int64_t budget) {
    return shintani_histogram(T, c, chi.level, budget).kloosterman(T, chi);
}

cplx mks_bruteforce(const FieldTower& T, const MultChar& chi, const ClassLabel& h, int64_t budget) {
    return mks_bruteforce_function(T, chi, h.n(), budget)(h);
}

ClassFunction mks_convolve_function(const FieldTower& T, const CompositeChar& alpha, int c, int64_t budget) {
    if (alpha.s() == 0) throw std::invalid_argument("empty composite character");
    const double G = double(gl_order(T.q(), c));
    if (alpha.s() > 1 && std::pow(G, alpha.s() - 1) > double(budget))
        throw BudgetError("convolution over GL_" + std::to_string(c), std::pow(G, alpha.s() - 1));
    ClassFunction f = mks_bruteforce_function(T, alpha.alpha[0], c, budget);
    for (int i = 1; i < alpha.s(); ++i)
        f = convolve(T, f, mks_bruteforce_function(T, alpha.alpha[i], c, budget), budget);
    return f;
}

cplx mks_convolve(const FieldTower& T, const CompositeChar& alpha, const ClassLabel& h, int64_t budget) {
    return mks_convolve_function(T, alpha, h.n(), budget)(h);
}

namespace {

// H^_mu(X; Q) in power sums, coefficients as doubles
const std::vector<std::pair<Partition, double>>& hl_hat_powersum(const Partition& mu, int64_t Q) {
    static std::mutex m;
    static std::map<std::pair<Partition, int64_t>, std::vector<std::pair<Partition, double>>> cache;
    std::lock_guard lock(m);
    auto key = std::make_pair(mu, Q);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ps = convert(hl_modified(mu, part_size(mu), Rational(Q)), Basis::powersum);
    std::vector<std::pair<Partition, double>> out;
    for (auto& [rho, c] : ps.coeffs)
        if (c != 0) out.push_back({rho, c.get_d()});
    return cache[key] = std::move(out);
}

double sign(int e) { return e % 2 ? -1.0 : 1.0; }

}  // namespace

cplx normalized_root_power_sum(const FieldTower& T, const CompositeChar& alpha, const Orbit& xi, int m) {
    const int a = xi.a, k = alpha.k();
    Elem x = T.embed(orbit_element(T, xi), a * m);
    return sign((k - 1) * (a * m + 1)) * kloosterman_normalized(T, alpha, a, m, x);
}

namespace {

cplx hl_normalized(const FieldTower& T, const CompositeChar& alpha, const ClassLabel& h) {
    cplx r = 1;
    for (auto& [o, mu] : h.blocks) {
        const int b = part_size(mu);
        std::vector<cplx> pm(size_t(b) + 1);
        for (int m = 1; m <= b; ++m) pm[m] = normalized_root_power_sum(T, alpha, o, m);
        cplx s = 0;
        for (auto& [rho, c] : hl_hat_powersum(mu, T.qpow(o.a))) {
            cplx t = c;
            for (int part : rho) t *= pm[part];
            s += t;
        }
        r *= s;
    }
    return r;
}

}  // namespace

cplx mks_hl(const FieldTower& T, const CompositeChar& alpha, const ClassLabel& h) {
    return mks_scale(T.q(), alpha.k(), h.n()) * hl_normalized(T, alpha, h);
}

ClassFunction mks_hl_function(const FieldTower& T, const CompositeChar& alpha, int c) {
    return make_class_function(T, c, [&](const ClassLabel& h) { return mks_hl(T, alpha, h); });
}

cplx mks_value(const FieldTower& T, const CompositeChar& alpha, const ClassLabel& h, MksPath path, int64_t budget) {
    switch (path) {
        case MksPath::hl: return mks_hl(T, alpha, h);
        case MksPath::brute:
            if (alpha.s() == 1) return mks_bruteforce(T, alpha.alpha[0], h, budget);
            [[fallthrough]];
        case MksPath::conv: return mks_convolve(T, alpha, h, budget);
    }
    return 0.0;
}

cplx mks_normalized(const FieldTower& T, const CompositeChar& alpha, const ClassLabel& h, MksPath path,
                    int64_t budget) {
    return mks_value(T, alpha, h, path, budget) / mks_scale(T.q(), alpha.k(), h.n());
}

CompositeChar regular_reduction(const FieldTower& T, const CompositeChar& alpha, int* sign_exponent) {
    CompositeChar r;
    int e = 0;
    for (size_t i = 0; i < alpha.alpha.size(); ++i) {
        MultChar base = restrict_to_degree(T, alpha.alpha[i]);
        const int m = alpha.lambda[i] / base.level;
        for (int j = 0; j < m; ++j) {
            r.lambda.push_back(base.level);
            r.alpha.push_back(base);
        }
        e += m - 1;
    }
    if (sign_exponent) *sign_exponent = e;
    return r;
}

ReductionReport mks_reduce_nonregular(const FieldTower& T, const MultChar& chi, const MultChar& chi_prime, int c,
                                      int64_t budget) {
    const int k = chi.level, kp = chi_prime.level;
    if (k % kp != 0 || inflate(T, chi_prime, k) != chi)
        throw std::invalid_argument(format_char(chi) + " is not " + format_char(chi_prime) + " composed with the norm");
    const int m = k / kp;
    CompositeChar rep{std::vector<int>(size_t(m), kp), std::vector<MultChar>(size_t(m), chi_prime)};
    auto lhs = mks_bruteforce_function(T, chi, c, budget);
    auto rhs = mks_convolve_function(T, rep, c, budget);
    ReductionReport r;
    r.classes = lhs.table->classes;
    for (size_t i = 0; i < lhs.v.size(); ++i) {
        r.lhs.push_back(lhs.v[i]);
        r.rhs.push_back(sign(c * (m - 1)) * rhs.v[i]);
        r.max_err = std::max(r.max_err, std::abs(r.lhs.back() - r.rhs.back()));
    }
    return r;
}

cplx block_unipotent_average(const FieldTower& T, const ClassFunction& f, const MatrixGL& h1, const MatrixGL& h2) {
    const int c1 = h1.n, c2 = h2.n;
    MatrixGL h = block_diag(T, {h1, h2});
    const int64_t q = T.q();
    std::vector<int64_t> digit(size_t(c1 * c2), 0);
    MatrixGL n = identity_matrix(T, c1 + c2, 1);
    cplx s = 0;
    int64_t count = 0;
    while (true) {
        s += f.at(T, mat_mul(T, h, n));
        ++count;
        size_t i = 0;
        for (; i < digit.size(); ++i) {
            const int r = int(i) / c2, col = c1 + int(i) % c2;
            if (++digit[i] < q) {
                n(r, col) = T.from_code(1, digit[i]);
                break;
            }
            digit[i] = 0;
            n(r, col) = T.zero(1);
        }
        if (i == digit.size()) break;
    }
    return s / double(count);
}

// ---------------------------------------------------------------------------------------
// global function

namespace {

using Graded = std::vector<std::map<ClassLabel, cplx>>;

// exp of a graded power-sum series with no constant term, up to degree n
Graded exp_series(const FieldTower& T, const Graded& L, int n) {
    Graded E(size_t(n) + 1);
    E[0][ClassLabel{}] = 1.0;
    for (int d = 1; d <= n; ++d) {
        LambdaFElement acc{d, LambdaBasis::powersum, {}};
        for (int j = 1; j <= d; ++j) {
            if (L[j].empty() || E[d - j].empty()) continue;
            LambdaFElement lj{j, LambdaBasis::powersum, L[j]}, ed{d - j, LambdaBasis::powersum, E[d - j]};
            auto prod = lambda_mul(T, lj, ed);
            for (auto& [key, c] : prod.coeffs) acc.coeffs[key] += double(j) * c / double(d);
        }
        E[d] = std::move(acc.coeffs);
    }
    return E;
}

double max_diff(const std::map<ClassLabel, cplx>& a, const std::map<ClassLabel, cplx>& b) {
    double e = 0;
    for (auto& [k, v] : a) {
        auto it = b.find(k);
        e = std::max(e, std::abs(v - (it == b.end() ? cplx(0) : it->second)));
    }
    for (auto& [k, v] : b)
        if (!a.count(k)) e = std::max(e, std::abs(v));
    return e;
}

}  // namespace

GlobalTruncation global_truncation(const FieldTower& T, const CompositeChar& alpha, int n) {
    GlobalTruncation g;
    g.degree = n;
    const int k = alpha.k(), s = alpha.s();
    if (n == 0) {
        g.from_hl = g.euler = g.from_hl_hat = g.euler_hat = {0, LambdaBasis::powersum, {{ClassLabel{}, 1.0}}};
        return g;
    }
    auto K = make_class_function(T, n, [&](const ClassLabel& h) { return hl_normalized(T, alpha, h); });
    g.from_hl = to_powersum(T, charmap(K));
    g.from_hl_hat = class_to_character_side(T, g.from_hl);

    Graded L(size_t(n) + 1), Lhat(size_t(n) + 1);
    for (int a = 1; a <= n; ++a)
        for (auto& o : orbits_of_degree(T, a)) {
            for (int m = 1; a * m <= n; ++m)
                L[a * m][ClassLabel{{{o, {m}}}}] += normalized_root_power_sum(T, alpha, o, m) / double(m);
            MultChar beta{a, o.j};
            cplx x = std::pow(sign(s) * std::pow(double(T.q()), -0.5 * (k - 1)), a) *
                     composite_exotic_gauss(T, alpha, a, char_inv(T, beta));
            for (int m = 1; a * m <= n; ++m)
                Lhat[a * m][ClassLabel{{{o, {m}}}}] +=
                    std::pow(x, m) / (double(m) * (std::pow(double(T.q()), a * m) - 1));
        }
    g.euler = {n, LambdaBasis::powersum, exp_series(T, L, n)[n]};
    g.euler_hat = {n, LambdaBasis::powersum, exp_series(T, Lhat, n)[n]};
    g.err = max_diff(g.from_hl.coeffs, g.euler.coeffs);
    g.err_hat = max_diff(g.from_hl_hat.coeffs, g.euler_hat.coeffs);
    return g;
}

// ---------------------------------------------------------------------------------------
// zero-cycles

namespace {

Elem zero_cycle_target(const FieldTower& T, int c, int k, const Elem& t1, const Elem& t2) {
    Elem d = T.mul(T.inv(t1), T.pow(T.inv(t2), c - 1));
    return (c * k - 1) % 2 ? T.neg(d) : d;
}

bool is_regular_label(const ClassLabel& h) {
    for (auto& b : h.blocks)
        if (b.mu.size() != 1) return false;
    return true;
}

}  // namespace

int zero_cycle_count(const FieldTower& T, int c, const Elem& target_det) {
    int n = 0;
    for (auto& h : class_table(T, c).classes)
        if (is_regular_label(h) && class_det(T, h) == target_det) ++n;
    return n;
}

cplx zero_cycle_sum(const FieldTower& T, const CompositeChar& alpha, int c, const Elem& t1, const Elem& t2) {
    const int k = alpha.k(), s = alpha.s();
    auto inv = composite_inverse(T, alpha);
    const Elem target = zero_cycle_target(T, c, k, t1, t2);
    const Elem tw = (k - 1) % 2 ? T.neg(t2) : t2;
    cplx sum = 0;
    for (auto& h : class_table(T, c).classes) {
        if (!is_regular_label(h) || class_det(T, h) != target) continue;
        sum += hl_normalized(T, inv, h) * psi(T, T.mul(tw, class_trace(T, h)));
    }
    return sign((k + s) * c) * std::pow(double(T.q()), -0.5 * (c - 1)) * sum;
}

cplx zero_cycle_bessel(const FieldTower& T, const CompositeChar& alpha, int c, const Elem& t1, const Elem& t2) {
    const int k = alpha.k();
    if (c < 1 || c >= k) throw std::invalid_argument("zero-cycle identity needs 1 <= c < k");
    MatrixGL g = zero_matrix(T, k, 1);
    for (int i = 0; i < k - c; ++i) g(i, c + i) = T.one(1);
    for (int i = 0; i < c - 1; ++i) g(k - c + i, 1 + i) = t2;
    g(k - 1, 0) = t1;
    const double e = 0.5 * ((c - 1) + (k - c) + (c - 1) * (k - c));
    return std::pow(double(T.q()), e) * bessel(T, generic_parameter(T, alpha), g);
}

// ---------------------------------------------------------------------------------------
// bounds

double mks_flag_bound(const FieldTower& T, int k, const ClassLabel& h) {
    double b = 1;
    for (auto& [o, mu] : h.blocks) {
        auto f = hl_modified_flag_count(mu, k, o.a, T.p(), T.f());
        b *= evaluate(f, std::vector<cplx>(size_t(k), 1.0)).real();
    }
    return b;
}

double mks_regular_bound(int k, const ClassLabel& h) {
    double r = 1;
    for (auto& [o, mu] : h.blocks) {
        const int b = part_size(mu);
        double binom = 1;
        for (int i = 1; i <= b; ++i) binom = binom * (b + k - i) / i;
        r *= binom;
    }
    return r;
}

}  // namespace exo
