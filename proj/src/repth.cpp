#include "exotic/repth.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "exotic/etale.hpp"

namespace exo {

namespace {

std::recursive_mutex& cache_mutex() {
    static std::recursive_mutex m;
    return m;
}

double qpow_d(int64_t q, double e) { return std::pow(double(q), e); }

Partition one_row(int m) { return m > 0 ? Partition{m} : Partition{}; }
Partition ones(int m) { return Partition(size_t(m), 1); }

Partition merge_parts(const Partition& a, const Partition& b) {
    Partition r = a;
    r.insert(r.end(), b.begin(), b.end());
    std::sort(r.begin(), r.end(), std::greater<int>());
    return r;
}

int key_degree(const ClassLabel& c) { return c.n(); }

}  // namespace

// ---------------------------------------------------------------------------------------
// class tables and class functions

int ClassTable::find(const ClassLabel& c) const {
    auto it = index.find(c);
    if (it == index.end()) throw std::invalid_argument("class " + format_class(c) + " is not a class of GL_" + std::to_string(n));
    return it->second;
}

const ClassTable& class_table(const FieldTower& T, int n) {
    std::lock_guard lock(cache_mutex());
    static std::map<std::array<int, 3>, std::unique_ptr<ClassTable>> cache;
    auto& slot = cache[{T.p(), T.f(), n}];
    if (!slot) {
        auto t = std::make_unique<ClassTable>();
        t->q = T.q();
        t->n = n;
        t->order = gl_order(T.q(), n);
        t->classes = enumerate_classes(T, n);
        for (size_t i = 0; i < t->classes.size(); ++i) {
            t->sizes.push_back(class_size(T.q(), t->classes[i]));
            t->index[t->classes[i]] = int(i);
        }
        slot = std::move(t);
    }
    return *slot;
}

int class_index(const FieldTower& T, const MatrixGL& g) { return class_table(T, g.n).find(identify_class(T, g)); }

ClassFunction zero_function(const FieldTower& T, int n) {
    ClassFunction f;
    f.table = &class_table(T, n);
    f.v.assign(f.table->size(), 0.0);
    return f;
}

ClassFunction class_indicator(const FieldTower& T, const ClassLabel& c) {
    auto f = zero_function(T, c.n());
    f.v[f.table->find(c)] = 1.0;
    return f;
}

ClassFunction make_class_function(const FieldTower& T, int n, const std::function<cplx(const ClassLabel&)>& fn) {
    auto f = zero_function(T, n);
    for (size_t i = 0; i < f.v.size(); ++i) f.v[i] = fn(f.table->classes[i]);
    return f;
}

ClassFunction pullback(const FieldTower& T, const ClassFunction& f, const std::function<MatrixGL(const MatrixGL&)>& phi) {
    auto g = zero_function(T, f.n());
    for (size_t i = 0; i < g.v.size(); ++i) g.v[i] = f.at(T, phi(class_representative(T, g.table->classes[i])));
    return g;
}

ClassFunction operator+(const ClassFunction& a, const ClassFunction& b) {
    if (a.table != b.table) throw std::invalid_argument("class functions on different groups");
    ClassFunction r = a;
    for (size_t i = 0; i < r.v.size(); ++i) r.v[i] += b.v[i];
    return r;
}

ClassFunction operator*(cplx s, const ClassFunction& a) {
    ClassFunction r = a;
    for (auto& x : r.v) x *= s;
    return r;
}

cplx inner(const ClassFunction& f, const ClassFunction& g) {
    if (f.table != g.table) throw std::invalid_argument("class functions on different groups");
    cplx s = 0;
    for (size_t i = 0; i < f.v.size(); ++i) s += double(f.table->sizes[i]) * f.v[i] * std::conj(g.v[i]);
    return s / double(f.table->order);
}

ClassFunction convolve(const FieldTower& T, const ClassFunction& f, const ClassFunction& g, int64_t budget) {
    if (f.table != g.table) throw std::invalid_argument("class functions on different groups");
    const ClassTable& tab = *f.table;
    std::vector<MatrixGL> reps;
    for (auto& c : tab.classes) reps.push_back(class_representative(T, c));
    auto r = zero_function(T, tab.n);
    for_each_gl(T, tab.n, 1, budget, [&](const MatrixGL& x) {
        cplx fx = f.at(T, x);
        if (fx == 0.0) return;
        auto xi = mat_inv(T, x);
        for (size_t i = 0; i < reps.size(); ++i) r.v[i] += fx * g.at(T, mat_mul(T, xi, reps[i]));
    });
    return r;
}

// ---------------------------------------------------------------------------------------
// transition matrices between power sums and P~ at parameter Q

namespace {

struct Transition {
    std::vector<Partition> parts;
    std::map<Partition, int> idx;
    std::vector<std::vector<double>> p_to_pt;  // p_rho = sum_mu [rho][mu] P~_mu
    std::vector<std::vector<double>> pt_to_p;  // P~_mu = sum_rho [mu][rho] p_rho
};

const Transition& transition(int d, int64_t Q) {
    std::lock_guard lock(cache_mutex());
    static std::map<std::pair<int, int64_t>, std::unique_ptr<Transition>> cache;
    auto& slot = cache[{d, Q}];
    if (!slot) {
        auto t = std::make_unique<Transition>();
        t->parts = partitions_of(d);
        const size_t N = t->parts.size();
        for (size_t i = 0; i < N; ++i) t->idx[t->parts[i]] = int(i);
        t->p_to_pt.assign(N, std::vector<double>(N, 0.0));
        t->pt_to_p.assign(N, std::vector<double>(N, 0.0));
        Rational tq(Q);
        for (size_t i = 0; i < N; ++i) {
            SymElement p{d, d, Basis::powersum, 0, {{t->parts[i], 1}}};
            auto pt = convert(p, Basis::ptilde, tq);
            for (auto& [mu, c] : pt.coeffs) t->p_to_pt[i][t->idx[mu]] = c.get_d();
            SymElement h{d, d, Basis::ptilde, tq, {{t->parts[i], 1}}};
            auto ps = convert(h, Basis::powersum);
            for (auto& [rho, c] : ps.coeffs) t->pt_to_p[i][t->idx[rho]] = c.get_d();
        }
        slot = std::move(t);
    }
    return *slot;
}

// Expand each block independently and multiply out.
void expand_blocks(const ClassLabel& key, cplx coeff,
                   const std::function<std::vector<std::pair<Partition, double>>(const ClassBlock&)>& fn,
                   std::map<ClassLabel, cplx>& out) {
    std::vector<std::vector<std::pair<Partition, double>>> lists;
    for (auto& b : key.blocks) lists.push_back(fn(b));
    ClassLabel cur;
    cur.blocks.resize(key.blocks.size());
    std::function<void(size_t, cplx)> rec = [&](size_t i, cplx c) {
        if (i == lists.size()) {
            out[cur] += c;
            return;
        }
        for (auto& [mu, w] : lists[i]) {
            cur.blocks[i] = {key.blocks[i].orbit, mu};
            rec(i + 1, c * w);
        }
    };
    rec(0, coeff);
}

void prune(std::map<ClassLabel, cplx>& m) {
    for (auto it = m.begin(); it != m.end();) it = std::abs(it->second) < 1e-13 ? m.erase(it) : std::next(it);
}

int64_t orbit_q(int64_t q, const Orbit& o) { return ipow(q, o.a); }

// product of two power-sum monomials (keys), merging blocks on the same orbit
ClassLabel mul_keys(const ClassLabel& a, const ClassLabel& b) {
    ClassLabel r;
    size_t i = 0, j = 0;
    while (i < a.blocks.size() || j < b.blocks.size()) {
        if (j == b.blocks.size() || (i < a.blocks.size() && a.blocks[i].orbit < b.blocks[j].orbit))
            r.blocks.push_back(a.blocks[i++]);
        else if (i == a.blocks.size() || b.blocks[j].orbit < a.blocks[i].orbit)
            r.blocks.push_back(b.blocks[j++]);
        else {
            r.blocks.push_back({a.blocks[i].orbit, merge_parts(a.blocks[i].mu, b.blocks[j].mu)});
            ++i, ++j;
        }
    }
    return r;
}

std::map<ClassLabel, cplx> mul_powersum(const std::map<ClassLabel, cplx>& a, const std::map<ClassLabel, cplx>& b) {
    std::map<ClassLabel, cplx> r;
    for (auto& [ka, ca] : a)
        for (auto& [kb, cb] : b) r[mul_keys(ka, kb)] += ca * cb;
    return r;
}

}  // namespace

LambdaFElement charmap(const ClassFunction& f) {
    LambdaFElement e;
    e.degree = f.n();
    e.basis = LambdaBasis::ptilde;
    for (size_t i = 0; i < f.v.size(); ++i)
        if (f.v[i] != 0.0) e.coeffs[f.table->classes[i]] = f.v[i];
    return e;
}

ClassFunction from_charmap(const FieldTower& T, const LambdaFElement& e) {
    auto pt = to_ptilde(T, e);
    auto f = zero_function(T, e.degree);
    for (auto& [k, c] : pt.coeffs) f.v[f.table->find(k)] += c;
    return f;
}

LambdaFElement to_powersum(const FieldTower& T, const LambdaFElement& e) {
    if (e.basis == LambdaBasis::powersum) return e;
    LambdaFElement r{e.degree, LambdaBasis::powersum, {}};
    for (auto& [key, c] : e.coeffs)
        expand_blocks(key, c,
                      [&](const ClassBlock& b) {
                          auto& tr = transition(part_size(b.mu), orbit_q(T.q(), b.orbit));
                          std::vector<std::pair<Partition, double>> out;
                          const auto& row = tr.pt_to_p[tr.idx.at(b.mu)];
                          for (size_t j = 0; j < row.size(); ++j)
                              if (row[j] != 0) out.push_back({tr.parts[j], row[j]});
                          return out;
                      },
                      r.coeffs);
    prune(r.coeffs);
    return r;
}

LambdaFElement to_ptilde(const FieldTower& T, const LambdaFElement& e) {
    if (e.basis == LambdaBasis::ptilde) return e;
    LambdaFElement r{e.degree, LambdaBasis::ptilde, {}};
    for (auto& [key, c] : e.coeffs)
        expand_blocks(key, c,
                      [&](const ClassBlock& b) {
                          auto& tr = transition(part_size(b.mu), orbit_q(T.q(), b.orbit));
                          std::vector<std::pair<Partition, double>> out;
                          const auto& row = tr.p_to_pt[tr.idx.at(b.mu)];
                          for (size_t j = 0; j < row.size(); ++j)
                              if (row[j] != 0) out.push_back({tr.parts[j], row[j]});
                          return out;
                      },
                      r.coeffs);
    prune(r.coeffs);
    return r;
}

LambdaFElement lambda_add(const LambdaFElement& a, const LambdaFElement& b) {
    if (a.basis != b.basis) throw std::invalid_argument("lambda_add: basis mismatch");
    if (a.degree != b.degree) throw std::invalid_argument("lambda_add: degree mismatch");
    LambdaFElement r = a;
    for (auto& [k, c] : b.coeffs) r.coeffs[k] += c;
    return r;
}

LambdaFElement lambda_mul(const FieldTower& T, const LambdaFElement& a, const LambdaFElement& b) {
    auto pa = to_powersum(T, a), pb = to_powersum(T, b);
    LambdaFElement r{a.degree + b.degree, LambdaBasis::powersum, mul_powersum(pa.coeffs, pb.coeffs)};
    prune(r.coeffs);
    return r;
}

cplx lambda_inner(const FieldTower& T, const LambdaFElement& u, const LambdaFElement& v) {
    if (u.degree != v.degree) return 0.0;
    auto pu = to_powersum(T, u), pv = to_powersum(T, v);
    cplx s = 0;
    for (auto& [k, c] : pu.coeffs) {
        auto it = pv.coeffs.find(k);
        if (it == pv.coeffs.end()) continue;
        double w = 1;
        for (auto& b : k.blocks) {
            double Q = double(orbit_q(T.q(), b.orbit));
            w *= z_of(b.mu).get_d();
            for (int r : b.mu) w /= std::pow(Q, r) - 1;
        }
        s += c * std::conj(it->second) * w;
    }
    return s;
}

cplx lambda_hat_inner(const LambdaFElement& u, const LambdaFElement& v) {
    if (u.degree != v.degree) return 0.0;
    if (u.basis != LambdaBasis::powersum || v.basis != LambdaBasis::powersum)
        throw std::invalid_argument("lambda_hat_inner expects power-sum coordinates");
    cplx s = 0;
    for (auto& [k, c] : u.coeffs) {
        auto it = v.coeffs.find(k);
        if (it == v.coeffs.end()) continue;
        double w = 1;
        for (auto& b : k.blocks) w *= z_of(b.mu).get_d();
        s += c * std::conj(it->second) * w;
    }
    return s;
}

Orbit character_orbit(const FieldTower& T, const MultChar& chi) {
    auto r = restrict_to_degree(T, chi);
    return {r.level, orbit_label(T, r)};
}

namespace {

using GenKey = std::array<int64_t, 5>;  // p, f, orbit degree, orbit label, k

const std::map<ClassLabel, cplx>& generator_image(const FieldTower& T, const Orbit& o, int k, bool forward) {
    std::lock_guard lock(cache_mutex());
    static std::map<GenKey, std::map<ClassLabel, cplx>> fwd, inv;
    auto& cache = forward ? fwd : inv;
    GenKey key{T.p(), T.f(), o.a, o.j, k};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const int K = k * o.a;
    if (!T.has_level(K)) throw FieldError("tower lacks level " + std::to_string(K));
    const double sign = (K - 1) % 2 ? -1.0 : 1.0;
    std::map<ClassLabel, cplx> out;
    if (forward) {
        MultChar alpha{o.a, o.j};
        for (int64_t t = 0; t < T.units(K); ++t) {
            Orbit xo = orbit_of(T, T.from_log(K, t));
            ClassLabel lab{{{xo, one_row(K / xo.a)}}};
            out[lab] += sign * eval_mult_log(T, alpha, t % T.units(o.a));
        }
    } else {
        Elem xi = T.embed(orbit_element(T, o), K);
        const double scale = sign / double(T.units(K));
        for (int64_t j = 0; j < T.units(K); ++j) {
            MultChar a{K, j};
            Orbit th = character_orbit(T, a);
            ClassLabel lab{{{th, one_row(K / th.a)}}};
            out[lab] += scale * std::conj(eval_mult(T, a, xi));
        }
    }
    prune(out);
    return cache[key] = std::move(out);
}

std::map<ClassLabel, cplx> apply_generator_map(const FieldTower& T, const LambdaFElement& e, bool forward) {
    if (e.basis != LambdaBasis::powersum) throw std::invalid_argument("generator maps expect power-sum coordinates");
    std::map<ClassLabel, cplx> out;
    for (auto& [key, c] : e.coeffs) {
        std::map<ClassLabel, cplx> acc{{ClassLabel{}, c}};
        for (auto& b : key.blocks)
            for (int r : b.mu) acc = mul_powersum(acc, generator_image(T, b.orbit, r, forward));
        for (auto& [k2, c2] : acc) out[k2] += c2;
    }
    prune(out);
    return out;
}

}  // namespace

LambdaFElement chhat_p_transition(const FieldTower& T, const Orbit& theta, int k) {
    return {k * theta.a, LambdaBasis::powersum, generator_image(T, theta, k, true)};
}

LambdaFElement chhat_p_inverse(const FieldTower& T, const Orbit& xi, int k) {
    return {k * xi.a, LambdaBasis::powersum, generator_image(T, xi, k, false)};
}

LambdaFElement character_to_class_side(const FieldTower& T, const LambdaFElement& e) {
    return {e.degree, LambdaBasis::powersum, apply_generator_map(T, e, true)};
}

LambdaFElement class_to_character_side(const FieldTower& T, const LambdaFElement& e) {
    return {e.degree, LambdaBasis::powersum, apply_generator_map(T, to_powersum(T, e), false)};
}

// ---------------------------------------------------------------------------------------
// parameters

int parameter_size(const GreenParameter& phi) {
    int n = 0;
    for (auto& [o, mu] : phi) n += o.a * part_size(mu);
    return n;
}

std::string format_parameter(const GreenParameter& phi) {
    ClassLabel c;
    for (auto& [o, mu] : phi) c.blocks.push_back({o, mu});
    return format_class(c);
}

GreenParameter parse_parameter(const FieldTower& T, const std::string& s) {
    GreenParameter phi;
    for (auto& b : parse_class(T, s).blocks) phi[b.orbit] = b.mu;
    return phi;
}

std::vector<GreenParameter> enumerate_parameters(const FieldTower& T, int n) {
    std::vector<GreenParameter> out;
    for (auto& c : enumerate_classes(T, n)) {
        GreenParameter phi;
        for (auto& b : c.blocks) phi[b.orbit] = b.mu;
        out.push_back(phi);
    }
    return out;
}

GreenParameter cuspidal_parameter(const FieldTower& T, const MultChar& beta) {
    if (!is_regular(T, beta)) throw std::invalid_argument("cuspidal parameter needs a regular character");
    return {{character_orbit(T, beta), {1}}};
}

GreenParameter generic_parameter(const FieldTower& T, const CompositeChar& alpha) { return speh_parameter(T, alpha, 1); }

GreenParameter speh_parameter(const FieldTower& T, const CompositeChar& alpha, int c) {
    std::map<Orbit, int> mult;
    for (auto& a : alpha.alpha) {
        if (!is_regular(T, a)) throw std::invalid_argument("Speh parameter needs regular components");
        ++mult[character_orbit(T, a)];
    }
    GreenParameter phi;
    for (auto& [o, m] : mult) phi[o] = Partition(size_t(c), m);
    return phi;
}

GreenParameter dual_parameter(const FieldTower& T, const GreenParameter& phi) {
    GreenParameter r;
    for (auto& [o, mu] : phi) r[character_orbit(T, char_inv(T, MultChar{o.a, o.j}))] = mu;
    return r;
}

std::vector<MultChar> cuspidal_support(const GreenParameter& phi) {
    std::vector<MultChar> out;
    for (auto& [o, mu] : phi)
        for (int i = 0; i < part_size(mu); ++i) out.push_back({o.a, o.j});
    return out;
}

bool is_generic(const GreenParameter& phi) {
    for (auto& [o, mu] : phi)
        if (mu.size() != 1) return false;
    return true;
}

// ---------------------------------------------------------------------------------------
// characters

ClassFunction irreducible_character(const FieldTower& T, const GreenParameter& phi) {
    const int n = parameter_size(phi);
    std::map<ClassLabel, cplx> acc{{ClassLabel{}, 1.0}};
    for (auto& [o, mu] : phi) {
        if (char_degree(T, MultChar{o.a, o.j}) != o.a || character_orbit(T, MultChar{o.a, o.j}) != o)
            throw std::invalid_argument("parameter orbit " + std::to_string(o.a) + ":" + std::to_string(o.j) +
                                        " is not a canonical regular orbit");
        const int d = part_size(mu);
        auto s = convert(schur_sym(mu, d), Basis::powersum);
        std::map<ClassLabel, cplx> factor;
        for (auto& [rho, c] : s.coeffs) factor[ClassLabel{{{o, rho}}}] = c.get_d();
        acc = mul_powersum(acc, factor);
    }
    LambdaFElement hat{n, LambdaBasis::powersum, acc};
    return from_charmap(T, character_to_class_side(T, hat));
}

double dimension_formula(int64_t q, const GreenParameter& phi) {
    const int n = parameter_size(phi);
    double d = 1;
    for (int i = 1; i <= n; ++i) d *= qpow_d(q, i) - 1;
    for (auto& [o, mu] : phi) {
        const double t = qpow_d(q, -o.a);
        auto mt = transpose(mu);
        double s = std::pow(t, n_of(mu) + part_size(mu));
        for (size_t i = 0; i < mu.size(); ++i)
            for (int j = 0; j < mu[i]; ++j) s /= 1 - std::pow(t, mu[i] - j + mt[j] - int(i) - 1);
        d *= s;
    }
    return d;
}

namespace {

struct ParamKey {
    int p, f;
    GreenParameter phi;
    auto operator<=>(const ParamKey&) const = default;
};

}  // namespace

const ClassFunction& character_of(const FieldTower& T, const GreenParameter& phi) {
    std::lock_guard lock(cache_mutex());
    static std::map<ParamKey, ClassFunction> cache;
    ParamKey key{T.p(), T.f(), phi};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache[key] = irreducible_character(T, phi);
}

int64_t character_dimension(const FieldTower& T, const GreenParameter& phi) {
    const int n = parameter_size(phi);
    double d = character_of(T, phi)(ClassLabel{{{{1, 0}, ones(n)}}}).real();
    return std::llround(d);
}

int CharacterTable::find(const GreenParameter& phi) const {
    for (size_t i = 0; i < params.size(); ++i)
        if (params[i] == phi) return int(i);
    throw std::invalid_argument("parameter " + format_parameter(phi) + " not in table");
}

const CharacterTable& character_table(const FieldTower& T, int n) {
    std::lock_guard lock(cache_mutex());
    static std::map<std::array<int, 3>, std::unique_ptr<CharacterTable>> cache;
    auto& slot = cache[{T.p(), T.f(), n}];
    if (!slot) {
        auto t = std::make_unique<CharacterTable>();
        t->classes = &class_table(T, n);
        t->params = enumerate_parameters(T, n);
        for (auto& phi : t->params) {
            t->chars.push_back(character_of(T, phi));
            t->dims.push_back(character_dimension(T, phi));
        }
        slot = std::move(t);
    }
    return *slot;
}

cplx central_sign(const FieldTower& T, const GreenParameter& phi) {
    const int n = parameter_size(phi);
    auto& chi = character_of(T, phi);
    return chi.at(T, scalar_matrix(T, n, T.neg(T.one(1)))) / double(character_dimension(T, phi));
}

// ---------------------------------------------------------------------------------------
// parabolic induction

ClassFunction parabolic_induce(const FieldTower& T, const ClassFunction& f1, const ClassFunction& f2) {
    auto prod = lambda_mul(T, charmap(f1), charmap(f2));
    return from_charmap(T, prod);
}

ClassFunction parabolic_induce_brute(const FieldTower& T, const ClassFunction& f1, const ClassFunction& f2,
                                     int64_t budget) {
    const int n1 = f1.n(), n2 = f2.n(), n = n1 + n2;
    const ClassTable& tab = class_table(T, n);
    if (double(tab.order) * double(tab.size()) > double(budget))
        throw BudgetError("parabolic induction average", int64_t(double(tab.order) * double(tab.size())));
    std::vector<MatrixGL> reps;
    for (auto& c : tab.classes) reps.push_back(class_representative(T, c));
    auto r = zero_function(T, n);
    for_each_gl(T, n, 1, budget, [&](const MatrixGL& x) {
        auto xi = mat_inv(T, x);
        for (size_t i = 0; i < reps.size(); ++i) {
            auto y = mat_mul(T, mat_mul(T, x, reps[i]), xi);
            bool in_p = true;
            for (int a = n1; a < n && in_p; ++a)
                for (int b = 0; b < n1; ++b)
                    if (!y(a, b).is_zero()) {
                        in_p = false;
                        break;
                    }
            if (!in_p) continue;
            MatrixGL h1 = zero_matrix(T, n1, 1), h2 = zero_matrix(T, n2, 1);
            for (int a = 0; a < n1; ++a)
                for (int b = 0; b < n1; ++b) h1(a, b) = y(a, b);
            for (int a = 0; a < n2; ++a)
                for (int b = 0; b < n2; ++b) h2(a, b) = y(n1 + a, n1 + b);
            r.v[i] += f1.at(T, h1) * f2.at(T, h2);
        }
    });
    const double P = double(gl_order(T.q(), n1)) * double(gl_order(T.q(), n2)) * qpow_d(T.q(), n1 * n2);
    for (auto& x : r.v) x /= P;
    return r;
}

// ---------------------------------------------------------------------------------------
// Speh characters from Jordan-block supported functions

ClassFunction jordan_supported(const FieldTower& T, const MultChar& alpha, int m) {
    if (!is_regular(T, alpha)) throw std::invalid_argument("jordan_supported needs a regular character");
    const int k = alpha.level, n = k * m;
    if (!T.has_level(n)) throw FieldError("tower lacks level " + std::to_string(n));
    return make_class_function(T, n, [&](const ClassLabel& c) -> cplx {
        if (c.blocks.size() != 1) return 0.0;
        const auto& [o, mu] = c.blocks[0];
        const int l = int(mu.size());
        double w = l % 2 ? 1.0 : -1.0;
        for (int j = 1; j < l; ++j) w *= qpow_d(T.q(), o.a * j) - 1;
        Elem xi = T.embed(orbit_element(T, o), n);
        cplx s = 0;
        for (int j = 0; j < o.a; ++j) s += eval_mult(T, alpha, T.norm(T.frobenius(xi, j), k));
        return w * s;
    });
}

ClassFunction speh_character(const FieldTower& T, const MultChar& alpha, int c) {
    const int k = alpha.level;
    std::vector<ClassFunction> blocks(size_t(c) + 1);
    for (int m = 1; m <= c; ++m) blocks[m] = jordan_supported(T, alpha, m);
    auto r = zero_function(T, k * c);
    for (auto& la : partitions_of(c)) {
        ClassFunction f = blocks[la[0]];
        for (size_t i = 1; i < la.size(); ++i) f = parabolic_induce(T, f, blocks[la[i]]);
        r = r + cplx(1.0 / z_of(la).get_d()) * f;
    }
    return ((k - 1) * c % 2 ? -1.0 : 1.0) * r;
}

// ---------------------------------------------------------------------------------------
// unipotent averages

void for_each_block_unipotent(const FieldTower& T, int k, int c,
                              const std::function<void(const MatrixGL&, const Elem&)>& fn) {
    const int n = k * c;
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i / c < j / c) cells.push_back({i, j});
    MatrixGL u = identity_matrix(T, n, 1);
    const int64_t q = T.q();
    std::vector<int64_t> digit(cells.size(), 0);
    while (true) {
        Elem arg = T.zero(1);
        for (int b = 0; b + 1 < k; ++b)
            for (int r = 0; r < c; ++r) arg = T.add(arg, u(b * c + r, (b + 1) * c + r));
        fn(u, arg);
        size_t i = 0;
        for (; i < cells.size(); ++i) {
            if (++digit[i] < q) {
                u(cells[i].first, cells[i].second) = T.from_code(1, digit[i]);
                break;
            }
            digit[i] = 0;
            u(cells[i].first, cells[i].second) = T.zero(1);
        }
        if (i == cells.size()) break;
    }
}

cplx bessel_speh(const FieldTower& T, const ClassFunction& chi, int k, int c, const MatrixGL& g) {
    if (chi.n() != k * c || g.n != k * c) throw std::invalid_argument("bessel_speh: size mismatch");
    cplx s = 0;
    int64_t count = 0;
    for_each_block_unipotent(T, k, c, [&](const MatrixGL& u, const Elem& arg) {
        s += std::conj(psi(T, arg)) * chi.at(T, mat_mul(T, u, g));
        ++count;
    });
    return s / double(count);
}

cplx bessel(const FieldTower& T, const GreenParameter& pi, const MatrixGL& g) {
    if (!is_generic(pi)) throw std::invalid_argument("Bessel function needs a generic representation");
    return bessel_speh(T, character_of(T, pi), parameter_size(pi), 1, g);
}

MatrixGL antidiagonal_embedding(const FieldTower& T, const MatrixGL& h, int k) {
    const int c = h.n, n = k * c;
    MatrixGL g = zero_matrix(T, n, h.level);
    for (int i = 0; i < (k - 1) * c; ++i) g(i, c + i) = T.one(h.level);
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) g((k - 1) * c + i, j) = h(i, j);
    return g;
}

cplx bessel_speh_value(const FieldTower& T, const CompositeChar& alpha, const MatrixGL& h) {
    const int k = alpha.k(), c = h.n;
    if (k == 1) return eval_mult(T, alpha.alpha[0], det(T, h)) * psi(T, mat_trace(T, mat_inv(T, h)));
    auto& chi = character_of(T, speh_parameter(T, alpha, c));
    return bessel_speh(T, chi, k, c, antidiagonal_embedding(T, h, k));
}

namespace {

struct CompositeKey {
    int p, f, c;
    std::vector<int> lambda;
    std::vector<int64_t> js;
    auto operator<=>(const CompositeKey&) const = default;
};

CompositeKey composite_key(const FieldTower& T, const CompositeChar& a, int c) {
    CompositeKey k{T.p(), T.f(), c, a.lambda, {}};
    for (auto& x : a.alpha) k.js.push_back(x.j);
    return k;
}

}  // namespace

const ClassFunction& bessel_speh_function(const FieldTower& T, const CompositeChar& alpha, int c) {
    std::lock_guard lock(cache_mutex());
    static std::map<CompositeKey, ClassFunction> cache;
    auto key = composite_key(T, alpha, c);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto f = make_class_function(T, c, [&](const ClassLabel& C) {
        return bessel_speh_value(T, alpha, class_representative(T, C));
    });
    return cache[key] = std::move(f);
}

// ---------------------------------------------------------------------------------------
// Shintani histogram and Kondo scalars

ShintaniHistogram::ShintaniHistogram(const FieldTower& T, int c, int k, int64_t budget)
    : c_(c), k_(k), p_(T.p()), units_(T.units(k)), table_(&class_table(T, c)) {
    h_.assign(table_->size() * size_t(units_) * size_t(p_), 0);
    for_each_gl(T, c, k, budget, [&](const MatrixGL& x) {
        const int cls = table_->find(shintani_norm_class(T, x));
        const int64_t t = det(T, x).log();
        const int r = T.abs_trace(mat_trace(T, x));
        ++h_[(size_t(cls) * units_ + t) * p_ + r];
    });
}

int64_t ShintaniHistogram::total() const { return std::accumulate(h_.begin(), h_.end(), int64_t(0)); }

std::vector<cplx> ShintaniHistogram::weights(const FieldTower& T, const MultChar& chi) const {
    if (chi.level != k_) throw std::invalid_argument("histogram character level mismatch");
    std::vector<cplx> ps(p_);
    for (int r = 0; r < p_; ++r) ps[r] = psi_prime(T, r);
    std::vector<cplx> w(table_->size(), 0.0);
    for (size_t cls = 0; cls < table_->size(); ++cls)
        for (int64_t t = 0; t < units_; ++t) {
            cplx ct = eval_mult_log(T, chi, t);
            for (int r = 0; r < p_; ++r) {
                int64_t n = h_[(cls * units_ + t) * p_ + r];
                if (n) w[cls] += double(n) * ct * ps[r];
            }
        }
    return w;
}

cplx ShintaniHistogram::pair(const FieldTower& T, const ClassFunction& f, const MultChar& chi) const {
    if (f.table != table_) throw std::invalid_argument("histogram class function on a different group");
    auto w = weights(T, chi);
    cplx s = 0;
    for (size_t i = 0; i < w.size(); ++i) s += w[i] * f.v[i];
    return s;
}

ClassFunction ShintaniHistogram::kloosterman(const FieldTower& T, const MultChar& chi) const {
    auto w = weights(T, chi);
    ClassFunction f{table_, {}};
    for (size_t i = 0; i < w.size(); ++i) f.v.push_back(w[i] / double(table_->sizes[i]));
    return f;
}

const ShintaniHistogram& shintani_histogram(const FieldTower& T, int c, int k, int64_t budget) {
    std::lock_guard lock(cache_mutex());
    static std::map<std::array<int, 4>, std::unique_ptr<ShintaniHistogram>> cache;
    auto& slot = cache[{T.p(), T.f(), c, k}];
    if (!slot) slot = std::make_unique<ShintaniHistogram>(T, c, k, budget);
    return *slot;
}

cplx kondo_scalar(const FieldTower& T, const GreenParameter& pi, const MultChar& chi, int64_t budget) {
    const int c = parameter_size(pi), k = chi.level;
    auto& H = shintani_histogram(T, c, k, budget);
    auto s = H.pair(T, character_of(T, pi), chi);
    return s * qpow_d(T.q(), -0.5 * k * c * c) / double(character_dimension(T, pi));
}

cplx kondo_gauss_closed(const FieldTower& T, const GreenParameter& pi, const MultChar& chi) {
    if (chi.level != 1) throw std::invalid_argument("kondo_gauss_closed takes a character of F_q^x");
    const int c = parameter_size(pi);
    cplx r = (c % 2 ? -1.0 : 1.0) * qpow_d(T.q(), -0.5 * c);
    for (auto& b : cuspidal_support(pi)) r *= gauss_sum(T, char_mul(T, b, inflate(T, chi, b.level)));
    return r;
}

cplx kondo_exotic_closed(const FieldTower& T, const GreenParameter& pi, const CompositeChar& alpha) {
    const int c = parameter_size(pi), k = alpha.k(), s = alpha.s();
    cplx r = ((c * s) % 2 ? -1.0 : 1.0) * qpow_d(T.q(), -0.5 * k * c);
    for (size_t i = 0; i < alpha.alpha.size(); ++i)
        for (auto& b : cuspidal_support(pi)) r *= exotic_gauss(T, b.level, alpha.lambda[i], b, alpha.alpha[i]);
    return r;
}

cplx epsilon0_cuspidal(const FieldTower& T, const MultChar& beta, const MultChar& alpha) {
    const int c = beta.level, k = alpha.level;
    return ((k * c) % 2 ? -1.0 : 1.0) * qpow_d(T.q(), -0.5 * k * c) *
           exotic_gauss(T, c, k, char_inv(T, beta), char_inv(T, alpha));
}

cplx epsilon0(const FieldTower& T, const GreenParameter& pi, const GreenParameter& tau) {
    cplx r = 1;
    for (auto& b : cuspidal_support(pi))
        for (auto& a : cuspidal_support(tau)) r *= epsilon0_cuspidal(T, b, a);
    return r;
}

cplx gamma_gk(const FieldTower& T, const GreenParameter& pi, const CompositeChar& alpha) {
    const int c = parameter_size(pi), k = alpha.k();
    auto& B = bessel_speh_function(T, alpha, c);
    auto& chi = character_of(T, pi);
    cplx s = 0;
    for (size_t i = 0; i < B.v.size(); ++i) s += double(B.table->sizes[i]) * B.v[i] * chi.v[i];
    cplx pre = s * qpow_d(T.q(), 0.5 * (k - 2) * c * c) / double(character_dimension(T, pi));
    return std::pow(central_sign(T, pi), k - 1) * pre;
}

std::vector<MultChar> shintani_lift_cuspidal_support(const FieldTower& T, const MultChar& beta, int k) {
    if (!is_regular(T, beta)) throw std::invalid_argument("Shintani lift support needs a regular character");
    const int c = beta.level;
    const int L = int(lcm64(c, k)), g = int(gcd64(c, k));
    std::vector<MultChar> out;
    for (int i = 0; i < g; ++i) out.push_back(inflate(T, char_frob(T, beta, i), L));
    return out;
}

int frobenius_power_orbit_size(const FieldTower& T, const MultChar& chi, int k) {
    MultChar x = chi;
    for (int s = 1;; ++s) {
        x = char_frob(T, x, k);
        if (x == chi) return s;
    }
}

cplx f_transform(const FieldTower& T, const CompositeChar& alpha, const MatrixGL& h) {
    const int c = h.n, k = alpha.k();
    const auto tau = generic_parameter(T, alpha);
    cplx s = 0;
    for (auto& pi : enumerate_parameters(T, c)) {
        if (!is_generic(pi)) continue;
        s += double(character_dimension(T, pi)) * std::pow(central_sign(T, pi), k - 1) *
             epsilon0(T, dual_parameter(T, pi), tau) * bessel(T, pi, h);
    }
    const double index = double(gl_order(T.q(), c)) / qpow_d(T.q(), c * (c - 1) / 2);
    return s * qpow_d(T.q(), -0.5 * c * (k - c - 1)) / index;
}

}  // namespace exo
