#pragma once

#include <vector>

#include "exotic/chars.hpp"
#include "exotic/etale.hpp"

namespace exo {

struct CompositeChar {
    std::vector<int> lambda;
    std::vector<MultChar> alpha;
    int k() const;
    int s() const { return int(lambda.size()); }
};

CompositeChar make_composite(const FieldTower& T, const std::vector<int>& lambda, const std::vector<MultChar>& alpha);
CompositeChar composite_inverse(const FieldTower& T, const CompositeChar& a);
bool is_regular(const FieldTower& T, const CompositeChar& a);

// Sum of psi(trace) over the units of a layout, bucketed by (N1 tuple, N2).
class UnitHistogram {
public:
    UnitHistogram(const FieldTower& T, const UnitLayout& layout, int64_t budget);
    // sum over units of alpha(N1) chi(N2) psi(tr), unsigned
    cplx pair(const FieldTower& T, const std::vector<MultChar>& alpha, const MultChar& chi) const;
    // sum over units with N2 = g^t of alpha(N1) psi(tr)
    cplx fiber(const FieldTower& T, const std::vector<MultChar>& alpha, int64_t t) const;

private:
    int p_;
    std::vector<int64_t> n1_mod_;
    int64_t n2_mod_;
    int64_t n1_size_;
    std::vector<int64_t> h_;  // counts by [n1 index][n2][trace residue]
    cplx cell(const FieldTower& T, int64_t n1, int64_t n2) const;
    std::vector<cplx> alpha_weights(const FieldTower& T, const std::vector<MultChar>& alpha) const;
};

// Defining sum over (F_k (x) F_m)^x, with the (-1)^{k+m+km} sign.
cplx exotic_gauss(const FieldTower& T, int k, int m, const MultChar& alpha, const MultChar& chi);
cplx exotic_gauss_product(const FieldTower& T, int k, int m, const MultChar& alpha, const MultChar& chi);
cplx composite_exotic_gauss(const FieldTower& T, const CompositeChar& alpha, int m, const MultChar& chi);
cplx composite_exotic_gauss_direct(const FieldTower& T, const CompositeChar& alpha, int m, const MultChar& chi);

// Kl_{m, F_a}(alpha, psi, xi) for xi at level a*m.  Uses the Gauss-sum expansion.
cplx kloosterman(const FieldTower& T, const CompositeChar& alpha, int a, int m, const Elem& xi);
cplx kloosterman_normalized(const FieldTower& T, const CompositeChar& alpha, int a, int m, const Elem& xi);
// all values Kl_M(alpha, psi, g_M^t) for t = 0..q^M-2, cached
const std::vector<cplx>& kloosterman_table(const FieldTower& T, const CompositeChar& alpha, int M);
// direct enumeration over ((F_lambda (x) F_a) (x)_{F_a} F_{am})^x
cplx kloosterman_brute(const FieldTower& T, const CompositeChar& alpha, int a, int m, const Elem& xi,
                       int64_t budget);

struct LPolynomial {
    int a = 1;
    std::vector<cplx> coeffs;  // c_0..c_k of L*(T), c_0 = 1
    std::vector<cplx> roots;   // normalized roots
    std::vector<cplx> series;  // coefficients of the exponential series up to the validation degree
};

// normalized series exp((-1)^k sum Kl*_m T^m / m) up to degree `upto`
std::vector<cplx> lseries(const FieldTower& T, const CompositeChar& alpha, int a, const Elem& xi, int upto);
LPolynomial lpolynomial(const FieldTower& T, const CompositeChar& alpha, int a, const Elem& xi, int validate_upto = 0);
// unnormalized roots omega_j = q^{a(k-1)/2} omega_j^*
std::vector<cplx> kloosterman_roots(const FieldTower& T, const CompositeChar& alpha, int a, const Elem& xi);

std::vector<cplx> roots_of(const std::vector<cplx>& coeffs);

// Tower levels touched by kloosterman_table(alpha, M) and by lpolynomial up to degree `upto`.
std::vector<int> kloosterman_levels(const std::vector<int>& lambda, int M);
std::vector<int> lpolynomial_levels(const std::vector<int>& lambda, int a, int upto);

}  // namespace exo
