#pragma once

#include <string>
#include <vector>

#include "exotic/expsums.hpp"
#include "exotic/repth.hpp"

namespace exo {

// Exotic matrix Kloosterman sums K(alpha, psi, h) on GL_c(F_q).
enum class MksPath { brute, conv, hl };
const char* path_name(MksPath p);
MksPath parse_path(const std::string& s);

// Tower levels needed for every path at this (lambda, c).
std::vector<int> mks_levels(const std::vector<int>& lambda, int c);

// q^{(k-1)c^2/2}, the factor between K and K*
double mks_scale(int64_t q, int k, int c);

// Defining sum over GL_c(F_{q^k}) for chi at level k, all classes at once.
ClassFunction mks_bruteforce_function(const FieldTower& T, const MultChar& chi, int c, int64_t budget);
cplx mks_bruteforce(const FieldTower& T, const MultChar& chi, const ClassLabel& h, int64_t budget);

// Group convolution of the per-component sums.
ClassFunction mks_convolve_function(const FieldTower& T, const CompositeChar& alpha, int c, int64_t budget);
cplx mks_convolve(const FieldTower& T, const CompositeChar& alpha, const ClassLabel& h, int64_t budget);

// Hall-Littlewood formula: (-1)^{(k-1)c} q^{(k-1)C(c,2)} prod_j H^_{mu_j}(omega_{[xi_j]}; q^{a_j})
cplx mks_hl(const FieldTower& T, const CompositeChar& alpha, const ClassLabel& h);
ClassFunction mks_hl_function(const FieldTower& T, const CompositeChar& alpha, int c);

// p_m(omega**_{[xi]}) for xi at level a: (-1)^{(k-1)(am+1)} Kl*_{am}(alpha, psi, xi)
cplx normalized_root_power_sum(const FieldTower& T, const CompositeChar& alpha, const Orbit& xi, int m);

// Dispatch; the brute path uses convolution of brute layers when s > 1.
cplx mks_value(const FieldTower& T, const CompositeChar& alpha, const ClassLabel& h, MksPath path, int64_t budget);
cplx mks_normalized(const FieldTower& T, const CompositeChar& alpha, const ClassLabel& h, MksPath path,
                    int64_t budget);

// Replace each non-regular alpha_i by m copies of the regular character it is inflated from.
// sign_exponent receives sum_i (m_i - 1); the sums differ by (-1)^{c * sign_exponent}.
CompositeChar regular_reduction(const FieldTower& T, const CompositeChar& alpha, int* sign_exponent = nullptr);

struct ReductionReport {
    std::vector<ClassLabel> classes;
    std::vector<cplx> lhs, rhs;  // K(chi, h) and (-1)^{c(m-1)} K(chi'^{x m}, h)
    double max_err = 0;
};
// chi at level k = m k', chi' at level k' with chi = chi' o N.  Throws if chi does not factor.
ReductionReport mks_reduce_nonregular(const FieldTower& T, const MultChar& chi, const MultChar& chi_prime, int c,
                                      int64_t budget);

// |N|^{-1} sum_{n} f(diag(h1, h2) n), n running over I + (upper right c1 x c2 block)
cplx block_unipotent_average(const FieldTower& T, const ClassFunction& f, const MatrixGL& h1, const MatrixGL& h2);

// Degree-n slice of the global function and the two Euler products.
struct GlobalTruncation {
    int degree = 0;
    LambdaFElement from_hl;          // charmap of K* on GL_n, power sums
    LambdaFElement euler;            // degree-n part of prod 1/(1 - X omega**)
    LambdaFElement from_hl_hat;      // same, pushed to the character side
    LambdaFElement euler_hat;        // degree-n part of the Gauss-sum Euler product
    double err = 0, err_hat = 0;     // max coefficient differences
};
GlobalTruncation global_truncation(const FieldTower& T, const CompositeChar& alpha, int n);

// Sum over regular classes (effective zero-cycles) of GL_c with det (-1)^{ck-1} t1^{-1} t2^{-(c-1)}:
// (-1)^{(k+s)c} q^{-(c-1)/2} sum K*(alpha^{-1}, cyc) psi((-1)^{k-1} t2 tr cyc)
cplx zero_cycle_sum(const FieldTower& T, const CompositeChar& alpha, int c, const Elem& t1, const Elem& t2);
// number of cycles in the sum above
int zero_cycle_count(const FieldTower& T, int c, const Elem& target_det);
// q^{((c-1)+(k-c)+(c-1)(k-c))/2} J_tau([[0,0,I_{k-c}],[0,t2 I_{c-1},0],[t1,0,0]])
cplx zero_cycle_bessel(const FieldTower& T, const CompositeChar& alpha, int c, const Elem& t1, const Elem& t2);

// |K*| bounds: product of fixed weak-flag counts, and prod C(b+k-1, b) for regular classes.
double mks_flag_bound(const FieldTower& T, int k, const ClassLabel& h);
double mks_regular_bound(int k, const ClassLabel& h);

}  // namespace exo
