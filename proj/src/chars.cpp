#include "exotic/chars.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace exo {

namespace {

struct RootCache {
    std::mutex mu;
    std::map<int64_t, std::shared_ptr<const std::vector<cplx>>> tables;
};

RootCache& root_cache() {
    static RootCache c;
    return c;
}

constexpr int64_t kRootTableMax = int64_t(1) << 22;

const std::vector<cplx>* roots_for(int64_t n) {
    if (n > kRootTableMax) return nullptr;
    auto& c = root_cache();
    std::lock_guard<std::mutex> lk(c.mu);
    auto it = c.tables.find(n);
    if (it != c.tables.end()) return it->second.get();
    auto v = std::make_shared<std::vector<cplx>>(n);
    for (int64_t r = 0; r < n; ++r) (*v)[r] = std::polar(1.0, 2 * std::numbers::pi * double(r) / double(n));
    c.tables[n] = v;
    return v.get();
}

}  // namespace

cplx root_of_unity(int64_t r, int64_t n) {
    r = mod(r, n);
    if (auto* t = roots_for(n)) return (*t)[r];
    return std::polar(1.0, 2 * std::numbers::pi * double(r) / double(n));
}

cplx eval_mult_log(const FieldTower& T, const MultChar& chi, int64_t t) {
    const int64_t N = T.units(chi.level);
    __int128 r = __int128(mod(chi.j, N)) * mod(t, N);
    return root_of_unity(int64_t(r % N), N);
}

cplx eval_mult(const FieldTower& T, const MultChar& chi, const Elem& x) {
    if (x.level != chi.level) throw FieldError("character level mismatch");
    if (x.is_zero()) throw FieldError("multiplicative character at zero");
    return eval_mult_log(T, chi, x.log());
}

cplx psi_prime(const FieldTower& T, int r) { return root_of_unity(r, T.p()); }

cplx psi(const FieldTower& T, const Elem& x) { return psi_prime(T, T.abs_trace(x)); }

int char_degree(const FieldTower& T, const MultChar& chi) {
    const int64_t N = T.units(chi.level);
    for (int d = 1; d <= chi.level; ++d) {
        if (chi.level % d) continue;
        __int128 r = __int128(T.units(d)) * mod(chi.j, N);
        if (r % N == 0) return d;
    }
    return chi.level;
}

bool is_regular(const FieldTower& T, const MultChar& chi) { return char_degree(T, chi) == chi.level; }

MultChar char_frob(const FieldTower& T, const MultChar& a, int64_t i) {
    const int64_t N = T.units(a.level);
    int64_t e = mod(i, a.level), qe = 1 % N;
    for (int64_t s = 0; s < e; ++s) qe = qe * T.q() % N;
    __int128 r = __int128(mod(a.j, N)) * qe;
    return {a.level, int64_t(r % N)};
}

std::vector<MultChar> frobenius_orbit(const FieldTower& T, const MultChar& chi) {
    std::vector<MultChar> out;
    int d = char_degree(T, chi);
    for (int i = 0; i < d; ++i) out.push_back(char_frob(T, chi, i));
    return out;
}

int64_t orbit_label(const FieldTower& T, const MultChar& chi) {
    int64_t best = mod(chi.j, T.units(chi.level));
    for (auto& c : frobenius_orbit(T, chi)) best = std::min(best, c.j);
    return best;
}

MultChar inflate(const FieldTower& T, const MultChar& chi, int target) {
    if (target % chi.level) throw FieldError("inflation target must be a multiple of the level");
    int64_t s = T.units(target) / T.units(chi.level);
    return {target, mod(chi.j, T.units(chi.level)) * s};
}

MultChar restrict_to_degree(const FieldTower& T, const MultChar& chi) {
    int d = char_degree(T, chi);
    int64_t s = T.units(chi.level) / T.units(d);
    return {d, mod(chi.j, T.units(chi.level)) / s};
}

MultChar char_mul(const FieldTower& T, const MultChar& a, const MultChar& b) {
    if (a.level != b.level) throw FieldError("character level mismatch");
    return {a.level, mod(a.j + b.j, T.units(a.level))};
}

MultChar char_inv(const FieldTower& T, const MultChar& a) { return {a.level, mod(-a.j, T.units(a.level))}; }

MultChar char_pow(const FieldTower& T, const MultChar& a, int64_t e) {
    const int64_t N = T.units(a.level);
    __int128 r = __int128(mod(a.j, N)) * mod(e, N);
    return {a.level, int64_t(r % N)};
}

cplx gauss_sum(const FieldTower& T, const MultChar& chi) {
    const int m = chi.level;
    const int64_t N = T.units(m);
    const uint8_t* tr = T.trace_by_log(m);
    cplx s = 0;
    for (int64_t t = 0; t < N; ++t) s += eval_mult_log(T, chi, t) * psi_prime(T, tr[t]);
    return -s;
}

namespace {
struct GaussCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, std::unique_ptr<std::vector<cplx>>> tables;
};
GaussCache& gauss_cache() {
    static GaussCache c;
    return c;
}
}  // namespace

void clear_gauss_tables() {
    auto& c = gauss_cache();
    std::lock_guard<std::mutex> lk(c.mu);
    c.tables.clear();
}

const std::vector<cplx>& gauss_table(const FieldTower& T, int m) {
    auto& gc = gauss_cache();
    std::lock_guard<std::mutex> lk(gc.mu);
    auto& cache = gc.tables;
    auto key = std::make_tuple(T.p(), T.f(), m);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    const int64_t N = T.units(m);
    const uint8_t* tr = T.trace_by_log(m);
    auto out = std::make_unique<std::vector<cplx>>(N);
    fftw_complex* buf = fftw_alloc_complex(N);
    for (int64_t t = 0; t < N; ++t) {
        cplx z = psi_prime(T, tr[t]);
        buf[t][0] = z.real();
        buf[t][1] = z.imag();
    }
    // backward transform: sum_t x_t exp(+2 pi i j t / N)
    fftw_plan plan = fftw_plan_dft_1d(int(N), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    for (int64_t j = 0; j < N; ++j) (*out)[j] = -cplx(buf[j][0], buf[j][1]);
    fftw_free(buf);
    auto& ref = *out;
    cache.emplace(key, std::move(out));
    return ref;
}

MultChar parse_char(const std::string& spec) {
    auto c = spec.find(':');
    if (c == std::string::npos) throw std::invalid_argument("character spec must look like m:j, got '" + spec + "'");
    return {std::stoi(spec.substr(0, c)), std::stoll(spec.substr(c + 1))};
}

std::string format_char(const MultChar& chi) { return std::to_string(chi.level) + ":" + std::to_string(chi.j); }

}  // namespace exo
