#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "exotic/chars.hpp"
#include "exotic/expsums.hpp"
#include "exotic/glq.hpp"

namespace exo {

// Conjugacy classes of GL_n(F_q) in enumerate_classes order, cached per (p, f, n).
struct ClassTable {
    int64_t q = 0;
    int n = 0;
    int64_t order = 0;  // |GL_n(F_q)|
    std::vector<ClassLabel> classes;
    std::vector<int64_t> sizes;
    std::map<ClassLabel, int> index;

    int find(const ClassLabel& c) const;  // throws if absent
    size_t size() const { return classes.size(); }
};

const ClassTable& class_table(const FieldTower& T, int n);
int class_index(const FieldTower& T, const MatrixGL& g);

// Values on the classes of class_table(T, n), in table order.
struct ClassFunction {
    const ClassTable* table = nullptr;
    std::vector<cplx> v;

    int n() const { return table->n; }
    cplx operator()(const ClassLabel& c) const { return v[table->find(c)]; }
    cplx at(const FieldTower& T, const MatrixGL& g) const { return v[class_index(T, g)]; }
};

ClassFunction zero_function(const FieldTower& T, int n);
ClassFunction class_indicator(const FieldTower& T, const ClassLabel& c);
ClassFunction make_class_function(const FieldTower& T, int n, const std::function<cplx(const ClassLabel&)>& fn);
// g(C) = f(class of phi(rep C)); phi must map GL_n(F_q) to itself compatibly with conjugation
ClassFunction pullback(const FieldTower& T, const ClassFunction& f, const std::function<MatrixGL(const MatrixGL&)>& phi);
ClassFunction operator+(const ClassFunction& a, const ClassFunction& b);
ClassFunction operator*(cplx s, const ClassFunction& a);
// <f, g> = |G|^{-1} sum_x f(x) conj g(x)
cplx inner(const ClassFunction& f, const ClassFunction& g);
// (f * g)(h) = sum_{x} f(x) g(x^{-1} h), by enumeration of GL_n(F_q)
ClassFunction convolve(const FieldTower& T, const ClassFunction& f, const ClassFunction& g, int64_t budget);

// ---------------------------------------------------------------------------------------
// Symmetric functions with one alphabet per Frobenius orbit.
//
// A key is a ClassLabel whose blocks are (orbit, partition).  On the class side orbits are
// orbits of elements of the algebraic closure; on the character side they are orbits of
// characters (same labels: the character g^t -> zeta^{jt} is orbit (deg, least j)).  In the
// power-sum basis the partition of a block is the cycle type rho of p_rho.
enum class LambdaBasis { ptilde, powersum };

struct LambdaFElement {
    int degree = 0;
    LambdaBasis basis = LambdaBasis::ptilde;
    std::map<ClassLabel, cplx> coeffs;

    cplx coeff(const ClassLabel& c) const {
        auto it = coeffs.find(c);
        return it == coeffs.end() ? cplx(0) : it->second;
    }
};

LambdaFElement charmap(const ClassFunction& f);
// inverse of charmap on the degree-n piece
ClassFunction from_charmap(const FieldTower& T, const LambdaFElement& e);
LambdaFElement to_powersum(const FieldTower& T, const LambdaFElement& e);
LambdaFElement to_ptilde(const FieldTower& T, const LambdaFElement& e);
LambdaFElement lambda_add(const LambdaFElement& a, const LambdaFElement& b);
// product, returned in the power-sum basis
LambdaFElement lambda_mul(const FieldTower& T, const LambdaFElement& a, const LambdaFElement& b);
// Class-side inner product: <p_rho, p_sigma> = delta z_rho prod_i 1/(Q^{rho_i} - 1) with Q = q^{deg xi}.
// Hermitian in the second slot.
cplx lambda_inner(const FieldTower& T, const LambdaFElement& u, const LambdaFElement& v);
// Character side: <p_rho, p_sigma> = delta z_rho per orbit (Schur functions orthonormal).
cplx lambda_hat_inner(const LambdaFElement& u, const LambdaFElement& v);

// Image of p_k^{[theta]} (character orbit theta) on the class side, power-sum basis.
LambdaFElement chhat_p_transition(const FieldTower& T, const Orbit& theta, int k);
// Image of p_k^{[xi]} (element orbit xi) on the character side, power-sum basis.
LambdaFElement chhat_p_inverse(const FieldTower& T, const Orbit& xi, int k);
// extend the generator maps multiplicatively (input in the power-sum basis)
LambdaFElement character_to_class_side(const FieldTower& T, const LambdaFElement& e);
LambdaFElement class_to_character_side(const FieldTower& T, const LambdaFElement& e);

// ---------------------------------------------------------------------------------------
// Representations.  A parameter assigns a partition to each Frobenius orbit of regular
// characters.  Convention: (1^c) on an orbit of degree d is the Speh representation of the
// cuspidal attached to the orbit (chi o det when d = 1), (c) is the generic one.
using GreenParameter = std::map<Orbit, Partition>;

int parameter_size(const GreenParameter& phi);
std::string format_parameter(const GreenParameter& phi);
// same grammar as class labels: "a:j:[..];..."
GreenParameter parse_parameter(const FieldTower& T, const std::string& s);
std::vector<GreenParameter> enumerate_parameters(const FieldTower& T, int n);
Orbit character_orbit(const FieldTower& T, const MultChar& chi);  // chi must be regular
GreenParameter cuspidal_parameter(const FieldTower& T, const MultChar& beta);
// generic representation with cuspidal support given by the components of alpha
GreenParameter generic_parameter(const FieldTower& T, const CompositeChar& alpha);
GreenParameter speh_parameter(const FieldTower& T, const CompositeChar& alpha, int c);
GreenParameter dual_parameter(const FieldTower& T, const GreenParameter& phi);
// cuspidal support as regular characters, with multiplicity
std::vector<MultChar> cuspidal_support(const GreenParameter& phi);
bool is_generic(const GreenParameter& phi);

// Green's formula via the characteristic maps.
ClassFunction irreducible_character(const FieldTower& T, const GreenParameter& phi);
// dim pi = Phi_c(q) prod s_mu(q^{-d}, q^{-2d}, ...)
double dimension_formula(int64_t q, const GreenParameter& phi);

struct CharacterTable {
    const ClassTable* classes = nullptr;
    std::vector<GreenParameter> params;
    std::vector<ClassFunction> chars;
    std::vector<int64_t> dims;
    int find(const GreenParameter& phi) const;
};
const CharacterTable& character_table(const FieldTower& T, int n);
const ClassFunction& character_of(const FieldTower& T, const GreenParameter& phi);
int64_t character_dimension(const FieldTower& T, const GreenParameter& phi);
// omega_pi(-1) = trace pi(-I) / dim pi
cplx central_sign(const FieldTower& T, const GreenParameter& phi);

// Parabolic induction.  The brute path runs the double-coset average over GL_{n1+n2}(F_q).
ClassFunction parabolic_induce(const FieldTower& T, const ClassFunction& f1, const ClassFunction& f2);
ClassFunction parabolic_induce_brute(const FieldTower& T, const ClassFunction& f1, const ClassFunction& f2,
                                     int64_t budget);

// Jordan-block supported class function chi_{(km)} on GL_{km} attached to a regular alpha at level k.
ClassFunction jordan_supported(const FieldTower& T, const MultChar& alpha, int m);
// (-1)^{(k-1)c} sum_{lambda |- c} chi_{k lambda} / z_lambda
ClassFunction speh_character(const FieldTower& T, const MultChar& alpha, int c);

// ---------------------------------------------------------------------------------------
// Unipotent averages.
//
// Visits u in U_{(c^k)} (block upper unitriangular, k blocks of size c) together with
// the argument sum_j tr X_j of psi_{k,c}(u).
void for_each_block_unipotent(const FieldTower& T, int k, int c,
                              const std::function<void(const MatrixGL&, const Elem&)>& fn);
// |U|^{-1} sum_u psi_{k,c}^{-1}(u) chi(u g), chi a character of GL_{kc}
cplx bessel_speh(const FieldTower& T, const ClassFunction& chi, int k, int c, const MatrixGL& g);
// Bessel function of a generic irreducible representation of GL_n.  Throws if not generic.
cplx bessel(const FieldTower& T, const GreenParameter& pi, const MatrixGL& g);
// B_tau(h) for tau generic with cuspidal support alpha, h in GL_c(F_q)
cplx bessel_speh_value(const FieldTower& T, const CompositeChar& alpha, const MatrixGL& h);
// h -> B_tau(h) on all classes of GL_c; cached
const ClassFunction& bessel_speh_function(const FieldTower& T, const CompositeChar& alpha, int c);
// [[0, I_{(k-1)c}], [h, 0]]
MatrixGL antidiagonal_embedding(const FieldTower& T, const MatrixGL& h, int k);

// ---------------------------------------------------------------------------------------
// Twisted sums over GL_c(F_{q^k}).
//
// Counts of x in GL_c(F_{q^k}) by (class of the Shintani norm, log det x, Tr_{F_{q^k}/F_p} tr x).
class ShintaniHistogram {
public:
    ShintaniHistogram(const FieldTower& T, int c, int k, int64_t budget);
    int c() const { return c_; }
    int k() const { return k_; }
    // sum_x f([N(x)]) chi(det x) psi_k(tr x)
    cplx pair(const FieldTower& T, const ClassFunction& f, const MultChar& chi) const;
    // h -> sum_{x: N(x) in [h]} chi(det x) psi_k(tr x) / #[h]
    ClassFunction kloosterman(const FieldTower& T, const MultChar& chi) const;
    int64_t total() const;

private:
    int c_, k_, p_;
    int64_t units_;
    const ClassTable* table_;
    std::vector<int64_t> h_;  // [class][log det][trace residue]
    std::vector<cplx> weights(const FieldTower& T, const MultChar& chi) const;
};
const ShintaniHistogram& shintani_histogram(const FieldTower& T, int c, int k, int64_t budget);

// G(pi, chi, psi) from the trace sum over GL_c(F_{q^k}); chi at level k.
cplx kondo_scalar(const FieldTower& T, const GreenParameter& pi, const MultChar& chi, int64_t budget);
// (-1)^c q^{-c/2} prod_j tau(beta_j * (chi o N), psi_{c_j}), chi at level 1
cplx kondo_gauss_closed(const FieldTower& T, const GreenParameter& pi, const MultChar& chi);
// q^{-kc/2} (-1)^{cs} prod_i prod_j tau_{c_j, k_i}(beta_j, alpha_i)
cplx kondo_exotic_closed(const FieldTower& T, const GreenParameter& pi, const CompositeChar& alpha);

cplx epsilon0_cuspidal(const FieldTower& T, const MultChar& beta, const MultChar& alpha);
cplx epsilon0(const FieldTower& T, const GreenParameter& pi, const GreenParameter& tau);
// omega_pi(-1)^{k-1} q^{(k-2)c^2/2} sum_h B_tau(h) trace pi(h) / dim pi
cplx gamma_gk(const FieldTower& T, const GreenParameter& pi, const CompositeChar& alpha);

// Cuspidal support of the Shintani lift of the cuspidal [beta] (beta regular at level c) to
// GL_c(F_{q^k}): beta^{q^i} o N at level lcm(c, k), i < gcd(c, k).  Each has Frob^k-orbit
// size lcm(c, k) / k.
std::vector<MultChar> shintani_lift_cuspidal_support(const FieldTower& T, const MultChar& beta, int k);
int frobenius_power_orbit_size(const FieldTower& T, const MultChar& chi, int k);

// F_{tau,c,psi}(h): sum over generic pi of GL_c of dim pi omega_pi(-1)^{k-1} eps0(pi^v x tau) J_pi(h)
cplx f_transform(const FieldTower& T, const CompositeChar& alpha, const MatrixGL& h);

}  // namespace exo
