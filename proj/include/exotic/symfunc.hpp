#pragma once

#include <gmpxx.h>

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace exo {

using Partition = std::vector<int>;
using Rational = mpq_class;

// all partitions of d, largest first in reverse lexicographic order: (d), (d-1,1), ...
const std::vector<Partition>& partitions_of(int d);
int part_size(const Partition& la);
Partition transpose(const Partition& la);
// n(la) = sum (j-1) la_j
int n_of(const Partition& la);
// z_la = prod_i i^{m_i} m_i!
Rational z_of(const Partition& la);
// m[i] = number of parts equal to i, for i = 0..max part (m[0] unused)
std::vector<int> multiplicities(const Partition& la);
std::string format_partition(const Partition& la);
// "[2,1]" or "2,1" or "" for the empty partition
Partition parse_partition_list(const std::string& s);

enum class Basis { monomial, powersum, schur, ptilde, hhat };
const char* basis_name(Basis b);

// An element of the degree-d piece of the ring of symmetric functions.  The
// coefficients refer to `basis`; for the Hall-Littlewood bases `t` is the parameter.
// nvars records the alphabet the element is meant for; it only matters when listing
// monomials or evaluating.
struct SymElement {
    int degree = 0;
    int nvars = 0;
    Basis basis = Basis::monomial;
    Rational t = 0;
    std::map<Partition, Rational> coeffs;

    Rational coeff(const Partition& la) const {
        auto it = coeffs.find(la);
        return it == coeffs.end() ? Rational(0) : it->second;
    }
};

SymElement convert(const SymElement& f, Basis target, const Rational& t = 0);
SymElement operator+(const SymElement& a, const SymElement& b);
SymElement operator*(const Rational& c, const SymElement& a);
bool equal(const SymElement& a, const SymElement& b);
// product in the ring (result in the monomial basis of degree d1 + d2)
SymElement multiply(const SymElement& a, const SymElement& b);

// basis elements as symmetric functions
SymElement monomial_sym(const Partition& la, int n);
SymElement power_sym(const Partition& rho, int n);
SymElement schur_sym(const Partition& la, int n);
SymElement complete_sym(int d, int n);

// Hall-Littlewood family, all returned in the monomial basis
SymElement hl_p(const Partition& la, int n, const Rational& t);
SymElement hl_q(const Partition& la, int n, const Rational& t);
// transformed: p_j -> p_j / (1 - t^j) applied to Q
SymElement hl_h(const Partition& la, int n, const Rational& t);
// modified: t^{n(la)} H_la(X; 1/t)
SymElement hl_modified(const Partition& mu, int n, const Rational& t);
// t^{-n(la)} P_la(X; 1/t)
SymElement hl_ptilde(const Partition& la, int n, const Rational& t);
// Coefficient of X^b counts weak flags of type b in F_{q^a}^{|mu|} fixed by J_mu(1), q = p^f.
SymElement hl_modified_flag_count(const Partition& mu, int n, int a, int p, int f = 1);

// bilinear Hall inner product, <p_la, p_mu> = z_la delta
Rational hall_inner(const SymElement& f, const SymElement& g);

std::complex<double> evaluate(const SymElement& f, const std::vector<std::complex<double>>& x);

// Polynomials in explicit variables, for identity checks.
using MPoly = std::map<std::vector<int>, Rational>;
MPoly to_polynomial(const SymElement& f, int n);
MPoly poly_mul(const MPoly& a, const MPoly& b);
MPoly poly_add(const MPoly& a, const MPoly& b);

// square transition matrix from `from` coordinates to monomial coordinates, indexed by partitions_of(d)
const std::vector<std::vector<Rational>>& to_monomial_matrix(int d, Basis from, const Rational& t = 0);

}  // namespace exo
