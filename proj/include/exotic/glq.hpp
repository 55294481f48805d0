#pragma once

#include <functional>
#include <string>
#include <vector>

#include "exotic/field.hpp"
#include "exotic/symfunc.hpp"

namespace exo {

// Dense n x n matrix with entries at one tower level.
struct MatrixGL {
    int level = 1;
    int n = 0;
    std::vector<Elem> a;  // row major

    Elem& operator()(int i, int j) { return a[size_t(i) * n + j]; }
    const Elem& operator()(int i, int j) const { return a[size_t(i) * n + j]; }
    bool operator==(const MatrixGL&) const = default;
};

MatrixGL zero_matrix(const FieldTower& T, int n, int level);
MatrixGL identity_matrix(const FieldTower& T, int n, int level);
MatrixGL scalar_matrix(const FieldTower& T, int n, const Elem& x);
MatrixGL mat_mul(const FieldTower& T, const MatrixGL& A, const MatrixGL& B);
MatrixGL mat_add(const FieldTower& T, const MatrixGL& A, const MatrixGL& B);
MatrixGL mat_neg(const FieldTower& T, const MatrixGL& A);
MatrixGL mat_inv(const FieldTower& T, const MatrixGL& A);
MatrixGL mat_embed(const FieldTower& T, const MatrixGL& A, int level);
MatrixGL mat_frobenius(const FieldTower& T, const MatrixGL& A, int64_t j);
// block diagonal, all blocks at the same level
MatrixGL block_diag(const FieldTower& T, const std::vector<MatrixGL>& blocks);
Elem det(const FieldTower& T, const MatrixGL& A);
Elem mat_trace(const FieldTower& T, const MatrixGL& A);
int rank(const FieldTower& T, const MatrixGL& A);
bool is_invertible(const FieldTower& T, const MatrixGL& A);

// Polynomials as coefficient vectors, constant term first.
using FPoly = std::vector<Elem>;
FPoly charpoly(const FieldTower& T, const MatrixGL& A);

// Frobenius orbit of xi = g_a^j with deg xi = a; j is the least log in the orbit.
struct Orbit {
    int a = 1;
    int64_t j = 0;
    auto operator<=>(const Orbit&) const = default;
};

std::vector<Orbit> orbits_of_degree(const FieldTower& T, int a);
Orbit orbit_of(const FieldTower& T, const Elem& xi);
Elem orbit_element(const FieldTower& T, const Orbit& o);
// monic minimal polynomial over F_q
FPoly min_poly(const FieldTower& T, const Orbit& o);
MatrixGL companion(const FieldTower& T, const FPoly& f);

struct ClassBlock {
    Orbit orbit;
    Partition mu;
    auto operator<=>(const ClassBlock&) const = default;
};

// Conjugacy class of GL_n(F_q): blocks sorted by orbit, orbits distinct.
struct ClassLabel {
    std::vector<ClassBlock> blocks;
    int n() const;
    auto operator<=>(const ClassLabel&) const = default;
};

ClassLabel canonical(ClassLabel c);
std::string format_class(const ClassLabel& c);
// `a:j:[m1,...]` blocks joined by ';'.  j may be any log of degree a; it is canonicalized.
ClassLabel parse_class(const FieldTower& T, const std::string& s);

std::vector<ClassLabel> enumerate_classes(const FieldTower& T, int n);
// J_mu(h_xi) for each block, over F_q
MatrixGL class_representative(const FieldTower& T, const ClassLabel& c);
// A at any level whose characteristic polynomial lies in F_q[x]
ClassLabel identify_class(const FieldTower& T, const MatrixGL& A);
bool is_regular_class(const ClassLabel& c);
// determinant and trace of the class, in F_q
Elem class_det(const FieldTower& T, const ClassLabel& c);
Elem class_trace(const FieldTower& T, const ClassLabel& c);

// |GL_n(F_Q)|, exact; throws if it does not fit in 63 bits
int64_t gl_order(int64_t Q, int n);
double gl_cardinality(int64_t Q, int n);
int64_t centralizer_order(int64_t q, const ClassLabel& c);
int64_t class_size(int64_t q, const ClassLabel& c);

// Frob^{k-1}(h) ... Frob(h) h for h at level k
MatrixGL shintani_norm(const FieldTower& T, const MatrixGL& h);
ClassLabel shintani_norm_class(const FieldTower& T, const MatrixGL& h);

// every element of GL_n(F_{q^m}), in a fixed order
void for_each_gl(const FieldTower& T, int n, int m, int64_t budget, const std::function<void(const MatrixGL&)>& fn);
// all n x n matrices (including singular ones) are visited; useful for unipotent groups etc.
void for_each_matrix(const FieldTower& T, int n, int m, const std::function<void(const MatrixGL&)>& fn);

}  // namespace exo
