#pragma once

#include <functional>
#include <string>
#include <vector>

#include "exotic/field.hpp"

namespace exo {

class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, double cardinality)
        : std::runtime_error(what), cardinality(cardinality) {}
    double cardinality;
};

int64_t default_budget();

// F_{q^k} (x)_{F_{q^b}} F_{q^m} = F_{q^l}^d with d = gcd(k/b, m/b), l = lcm(k, m).
struct TensorFactor {
    int k = 1, m = 1, base = 1;
    int d() const { return int(gcd64(k / base, m / base)); }
    int l() const { return int(lcm64(k, m)); }
};

// F_lambda (x) F_m: one factor per part.
std::vector<TensorFactor> tensor_layout(const std::vector<int>& lambda, int m);

// Coordinates per part: d_i elements of F_{q^{l_i}}.
using TensorElement = std::vector<std::vector<Elem>>;

std::vector<Elem> norm1(const FieldTower& T, const std::vector<int>& lambda, int m, const TensorElement& z);
Elem norm2(const FieldTower& T, const std::vector<int>& lambda, int m, const TensorElement& z);
Elem tensor_trace(const FieldTower& T, const std::vector<int>& lambda, int m, const TensorElement& z);

TensorElement tensor_mul(const FieldTower& T, const TensorElement& a, const TensorElement& b);
TensorElement tensor_add(const FieldTower& T, const TensorElement& a, const TensorElement& b);
bool is_unit(const TensorElement& z);

double unit_count(const FieldTower& T, const std::vector<int>& lambda, int m);
void for_each_unit(const FieldTower& T, const std::vector<int>& lambda, int m, int64_t budget,
                   const std::function<void(const TensorElement&)>& fn);

// A flat description of a unit group as a list of log coordinates.  Each coordinate lives
// at some level, adds its log to one N1 slot, and adds weight * log to N2.
struct UnitCoord {
    int level;
    int slot;          // which component of N1
    int64_t weight;    // contribution factor to the N2 log
    int64_t n1_weight = 1;  // Frobenius twist on the N1 side (base change only)
};
struct UnitLayout {
    std::vector<UnitCoord> coords;
    std::vector<int64_t> n1_mod;  // q^{k_i} - 1 per slot
    int64_t n2_mod = 1;           // q^{m} - 1 of the target level
    double cardinality(const FieldTower& T) const;
};

UnitLayout unit_layout(const FieldTower& T, const std::vector<int>& lambda, int m);
// F_lambda (x) F_a (x)_{F_a} F_{am}: the domain of the base-field variant of Kl.
UnitLayout base_change_layout(const FieldTower& T, const std::vector<int>& lambda, int a, int m);

std::vector<int> parse_partition(const std::string& spec);

}  // namespace exo
