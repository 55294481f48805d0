#include "exotic/etale.hpp"

#include <cstdlib>
#include <sstream>

namespace exo {

int64_t default_budget() {
    if (const char* s = std::getenv("EXOTIC_BUDGET")) {
        long long v = std::atoll(s);
        if (v > 0) return v;
    }
    return 100000000;
}

std::vector<TensorFactor> tensor_layout(const std::vector<int>& lambda, int m) {
    std::vector<TensorFactor> out;
    for (int k : lambda) out.push_back({k, m, 1});
    return out;
}

std::vector<Elem> norm1(const FieldTower& T, const std::vector<int>& lambda, int m, const TensorElement& z) {
    std::vector<Elem> out;
    for (size_t i = 0; i < lambda.size(); ++i) {
        TensorFactor tf{lambda[i], m, 1};
        Elem prod = T.one(tf.l());
        for (auto& x : z[i]) prod = T.mul(prod, x);
        out.push_back(T.norm(prod, lambda[i]));
    }
    return out;
}

Elem norm2(const FieldTower& T, const std::vector<int>& lambda, int m, const TensorElement& z) {
    Elem out = T.one(m);
    for (size_t i = 0; i < lambda.size(); ++i) {
        TensorFactor tf{lambda[i], m, 1};
        Elem prod = T.one(tf.l());
        for (int j = 0; j < tf.d(); ++j) prod = T.mul(prod, T.frobenius(z[i][j], j));
        out = T.mul(out, T.norm(prod, m));
    }
    return out;
}

Elem tensor_trace(const FieldTower& T, const std::vector<int>& lambda, int m, const TensorElement& z) {
    Elem out = T.zero(1);
    for (size_t i = 0; i < lambda.size(); ++i) {
        TensorFactor tf{lambda[i], m, 1};
        Elem s = T.zero(tf.l());
        for (auto& x : z[i]) s = T.add(s, x);
        out = T.add(out, T.trace(s, 1));
    }
    return out;
}

TensorElement tensor_mul(const FieldTower& T, const TensorElement& a, const TensorElement& b) {
    TensorElement r = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) r[i][j] = T.mul(a[i][j], b[i][j]);
    return r;
}

TensorElement tensor_add(const FieldTower& T, const TensorElement& a, const TensorElement& b) {
    TensorElement r = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) r[i][j] = T.add(a[i][j], b[i][j]);
    return r;
}

bool is_unit(const TensorElement& z) {
    for (auto& c : z)
        for (auto& x : c)
            if (x.is_zero()) return false;
    return true;
}

double unit_count(const FieldTower& T, const std::vector<int>& lambda, int m) {
    return unit_layout(T, lambda, m).cardinality(T);
}

void for_each_unit(const FieldTower& T, const std::vector<int>& lambda, int m, int64_t budget,
                   const std::function<void(const TensorElement&)>& fn) {
    double card = unit_count(T, lambda, m);
    if (card > double(budget))
        throw BudgetError("unit group has " + std::to_string(int64_t(card)) + " elements, budget " +
                              std::to_string(budget),
                          card);
    TensorElement z;
    std::vector<std::pair<int, int>> slots;
    for (size_t i = 0; i < lambda.size(); ++i) {
        TensorFactor tf{lambda[i], m, 1};
        z.emplace_back(tf.d(), T.one(tf.l()));
        for (int j = 0; j < tf.d(); ++j) slots.emplace_back(int(i), j);
    }
    // odometer over logs
    std::vector<int64_t> t(slots.size(), 0);
    while (true) {
        fn(z);
        size_t s = 0;
        for (; s < slots.size(); ++s) {
            auto [i, j] = slots[s];
            int lvl = z[i][j].level;
            if (++t[s] < T.units(lvl)) {
                z[i][j] = T.from_log(lvl, t[s]);
                break;
            }
            t[s] = 0;
            z[i][j] = T.one(lvl);
        }
        if (s == slots.size()) break;
    }
}

double UnitLayout::cardinality(const FieldTower& T) const {
    double c = 1;
    for (auto& u : coords) c *= double(T.units(u.level));
    return c;
}

UnitLayout unit_layout(const FieldTower& T, const std::vector<int>& lambda, int m) {
    UnitLayout L;
    L.n2_mod = T.units(m);
    for (size_t i = 0; i < lambda.size(); ++i) {
        TensorFactor tf{lambda[i], m, 1};
        L.n1_mod.push_back(T.units(lambda[i]));
        int64_t w = 1 % L.n2_mod;
        for (int j = 0; j < tf.d(); ++j) {
            L.coords.push_back({tf.l(), int(i), w});
            w = w * T.q() % L.n2_mod;
        }
    }
    return L;
}

UnitLayout base_change_layout(const FieldTower& T, const std::vector<int>& lambda, int a, int m) {
    UnitLayout L;
    const int am = a * m;
    L.n2_mod = T.units(am);
    const int64_t Q = T.qpow(a) % L.n2_mod;
    for (size_t i = 0; i < lambda.size(); ++i) {
        L.n1_mod.push_back(T.units(lambda[i]));
        TensorFactor first{lambda[i], a, 1};
        const int64_t nk = L.n1_mod.back();
        for (int c = 0; c < first.d(); ++c) {
            // copy c carries F_a through s -> s^{q^-c}; moving it to the standard
            // structure twists its N1 by Frob^{-c}
            int64_t tw = 1 % nk;
            for (int e = 0; e < mod(-c, lambda[i]); ++e) tw = tw * T.q() % nk;
            TensorFactor second{first.l(), am, a};
            int64_t w = 1 % L.n2_mod;
            for (int j = 0; j < second.d(); ++j) {
                L.coords.push_back({second.l(), int(i), w, tw});
                w = w * Q % L.n2_mod;
            }
        }
    }
    return L;
}

std::vector<int> parse_partition(const std::string& spec) {
    std::vector<int> out;
    if (!spec.empty() && spec.back() == '+') throw std::invalid_argument("bad partition spec '" + spec + "'");
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, '+')) {
        if (tok.empty()) throw std::invalid_argument("bad partition spec '" + spec + "'");
        int v = std::stoi(tok);
        if (v <= 0) throw std::invalid_argument("partition parts must be positive");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty partition spec");
    return out;
}

}  // namespace exo
