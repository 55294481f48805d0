#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace exo {

// Nonzero elements are stored as 1 + discrete log, zero as 0.
struct Elem {
    int level = 1;
    int64_t v = 0;
    bool is_zero() const { return v == 0; }
    int64_t log() const { return v - 1; }
    bool operator==(const Elem&) const = default;
};

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int64_t ipow(int64_t b, int e);
int64_t gcd64(int64_t a, int64_t b);
int64_t lcm64(int64_t a, int64_t b);
int64_t mod(int64_t a, int64_t n);
std::vector<int64_t> prime_factors(int64_t n);
bool is_prime(int64_t n);

class FieldTower {
public:
    static constexpr int64_t kDefaultCap = int64_t(1) << 26;

    FieldTower(int p, int f, int max_deg, int64_t cap = kDefaultCap);
    // Only the listed levels and their divisors are built.
    FieldTower(int p, int f, const std::vector<int>& levels, int64_t cap = kDefaultCap);

    bool has_level(int m) const { return m >= 1 && m <= max_deg_ && levels_[m - 1].m == m; }

    int p() const { return p_; }
    int f() const { return f_; }
    int64_t q() const { return q_; }
    int max_deg() const { return max_deg_; }

    int64_t size(int m) const { return lv(m).size; }
    int64_t units(int m) const { return lv(m).size - 1; }
    // q^j as a residue is what Frobenius needs; these are exact for the table range.
    int64_t qpow(int j) const { return ipow(q_, j); }

    const std::vector<int>& modulus(int m) const { return lv(m).modulus; }
    int64_t generator_code(int m) const { return lv(m).exp[1]; }

    Elem zero(int m) const { return {m, 0}; }
    Elem one(int m) const { return {m, 1}; }
    Elem gen(int m) const { return {m, units(m) > 1 ? 2 : 1}; }
    Elem from_log(int m, int64_t t) const { return {m, 1 + mod(t, units(m))}; }
    Elem from_int(int m, int64_t c) const;
    Elem from_code(int m, int64_t code) const;
    int64_t code(const Elem& x) const;

    Elem mul(const Elem& a, const Elem& b) const;
    Elem div(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    Elem pow(const Elem& a, int64_t e) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

    Elem frobenius(const Elem& x, int64_t j) const;
    Elem embed(const Elem& x, int n) const;
    // x at level n lying in the subfield of level m
    Elem descend(const Elem& x, int m) const;
    bool in_subfield(const Elem& x, int m) const;
    Elem norm(const Elem& x, int m) const;
    Elem trace(const Elem& x, int m) const;
    // Tr to the prime field, as an integer in [0, p)
    int abs_trace(const Elem& x) const;
    // smallest level containing x
    int degree(const Elem& x) const;
    // canonical orbit label: least log among the Frobenius conjugates
    int64_t orbit_min_log(const Elem& x) const;

    const int32_t* exp_table(int m) const { return lv(m).exp.data(); }
    const int32_t* zech_table(int m) const { return lv(m).zech.data(); }
    const uint8_t* trace_by_log(int m) const { return lv(m).trlog.data(); }

private:
    struct Level {
        int m = 0;
        int64_t size = 0;
        std::vector<int> modulus;
        std::vector<int32_t> exp;    // log -> code
        std::vector<int32_t> lg;     // code -> log, -1 at zero
        std::vector<int32_t> zech;   // n -> log(1 + g^n), -1 if zero
        std::vector<uint8_t> trlog;  // log -> absolute trace
        int64_t neg_one_log = 0;
    };
    const Level& lv(int m) const {
        if (!has_level(m)) throw FieldError("level " + std::to_string(m) + " outside tower");
        return levels_[m - 1];
    }
    void build_level(int m);
    void init(const std::vector<int>& levels, int64_t cap);

    int p_, f_, max_deg_;
    int64_t q_;
    std::vector<Level> levels_;
};

}  // namespace exo
