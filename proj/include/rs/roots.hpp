#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rs/field.hpp"

namespace rs {

struct FieldDescriptor {
    long p = 0;
    const Field* F = nullptr;
    std::vector<mpz_class> defining_poly;   // ascending, monic
    int e = 1, f = 1;
    Scalar uniformizer;
    Scalar generator;                       // image of the variable of defining_poly
};

// Accepts degree 1, polynomials whose Newton polygon is a single segment of
// slope a/d with gcd(a,d) = 1 and a = 1 mod d (totally ramified), and single
// integral slope with irreducible reduction (unramified).
FieldDescriptor build_field(long p, const std::vector<mpz_class>& poly);

// Lower Newton polygon. Returns (slope, length) pairs with slopes as
// rationals in v(p) = 1 units; roots of these lengths have valuation -slope.
std::vector<std::pair<mpq_class, long>> newton_polygon(const Poly& f);

// All roots of f lying in its field, to precision about prec.
std::vector<Scalar> find_roots(const Poly& f, long prec);

struct HeckeRoots {
    Scalar alpha, beta;
};
HeckeRoots hecke_roots(const Scalar& ap, const Scalar& eps, long k, const FieldDescriptor& E, long prec);

// Smallest field built from Q_p, Q_{p^2} and one ramified square root that
// contains the roots of x^2 - a x + eps p^(k+1) for both forms.
FieldDescriptor hecke_splitting_field(long p, long kf, const mpz_class& apf, const mpz_class& epsf, long kg,
                                      const mpz_class& apg, const mpz_class& epsg, long prec);

Scalar teichmuller(const Scalar& a, long prec);
mpz_class teichmuller_int(long t, long p, long K);   // in Z_p, modulo p^K

// log_p(a) modulo p^K for a = 1 mod p
mpz_class zp_log(const mpz_class& a, long p, long K);

// E(zeta_{p^k}) as K[z]/Phi_{p^k}(z+1) with E embedded through a root of its
// Eisenstein polynomial.
struct Composite {
    const Field* E = nullptr;
    const Field* C = nullptr;
    int k = 0;
    Scalar zeta;             // primitive p^k-th root of unity in C
    std::vector<Scalar> ypow;   // images of y^j, j < e(E)
    Scalar embed(const Scalar& a) const;
    Poly embed(const Poly& a) const;
};
const Composite& composite(const Field* E, int k, long prec);

Scalar root_of_unity(const Field* E, int k, long prec);   // in composite(E, k).C

}  // namespace rs
