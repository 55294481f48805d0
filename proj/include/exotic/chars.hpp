#pragma once

#include <complex>
#include <string>
#include <vector>

#include "exotic/field.hpp"

namespace exo {

using cplx = std::complex<double>;

// chi(g_m^t) = zeta_{q^m-1}^{j t}
struct MultChar {
    int level = 1;
    int64_t j = 0;
    bool operator==(const MultChar&) const = default;
};

cplx root_of_unity(int64_t r, int64_t n);

cplx eval_mult(const FieldTower& T, const MultChar& chi, const Elem& x);
// chi evaluated on g^t without building the element
cplx eval_mult_log(const FieldTower& T, const MultChar& chi, int64_t t);
// canonical additive character psi_m = psi o Tr_{F_{q^m}/F_p}
cplx psi(const FieldTower& T, const Elem& x);
cplx psi_prime(const FieldTower& T, int r);

int char_degree(const FieldTower& T, const MultChar& chi);
bool is_regular(const FieldTower& T, const MultChar& chi);
std::vector<MultChar> frobenius_orbit(const FieldTower& T, const MultChar& chi);
int64_t orbit_label(const FieldTower& T, const MultChar& chi);
MultChar inflate(const FieldTower& T, const MultChar& chi, int target);
// the level-d character chi' with chi = chi' o N, d = degree(chi)
MultChar restrict_to_degree(const FieldTower& T, const MultChar& chi);
MultChar char_mul(const FieldTower& T, const MultChar& a, const MultChar& b);
MultChar char_inv(const FieldTower& T, const MultChar& a);
MultChar char_pow(const FieldTower& T, const MultChar& a, int64_t e);
MultChar char_frob(const FieldTower& T, const MultChar& a, int64_t i);

// tau(chi, psi_m) = -sum_{x != 0} chi(x) psi_m(x)
cplx gauss_sum(const FieldTower& T, const MultChar& chi);
// every tau(chi_j, psi_m) at once, indexed by j; cached per (p, f, m)
const std::vector<cplx>& gauss_table(const FieldTower& T, int m);
// drop cached Gauss tables (they can be hundreds of MB at large levels)
void clear_gauss_tables();

MultChar parse_char(const std::string& spec);
std::string format_char(const MultChar& chi);

}  // namespace exo
