#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rs/field.hpp"

namespace rs {

// Parameters shared by all finite-level Iwasawa algebra objects.
struct LambdaRing {
    long p = 0;
    mpz_class u;            // chi(gamma), u = 1 mod p, u != 1 mod p^2
    const Field* F = nullptr;
    long prec = 0;          // working precision for non-exact steps

    LambdaRing() = default;
    LambdaRing(const Field* F_, const mpz_class& u_, long prec_);
    Scalar u_pow(long k) const;             // u^k, exact for k >= 0
    Scalar teich(long t) const;             // omega(t) at working precision
    mpz_class teich_int(long t, long K) const;
};

// Modulus as a product of twisted cyclotomic factors Tw^(-i) Phi_k, with
// Phi_0 = X. Keys are (k, i).
struct Modulus {
    std::map<std::pair<int, long>, int> mult;

    static Modulus omega(int n, int m);          // omega_{n,m}
    static Modulus phi(int n, int m);            // Phi_{n,m}
    static Modulus frak(int n, int m);           // N_{n,m}, zeros of the frak-n representative
    static Modulus twisted_phi(int k, long i, int e = 1);
    Modulus operator*(const Modulus& o) const;
    bool divides(const Modulus& o) const;
    Modulus twisted(long s) const;               // after Tw^s
    long degree(long p) const;
    int level() const;
    bool operator==(const Modulus& o) const { return mult == o.mult; }
    std::string str() const;
};

// Monic polynomials in Z = 1 + X.
Poly tw_omega_z(const LambdaRing& R, int k, long i);
Poly tw_phi_z(const LambdaRing& R, int k, long i);
Poly modulus_z(const LambdaRing& R, const Modulus& M);

// The same constructors in the X variable, for output and examples.
Poly omega_x(const Field* F, int n);
Poly phi_x(const Field* F, int n);
Poly z_to_x(const Poly& a);
Poly x_to_z(const Poly& a);

// Element of O[Delta][X] modulo a modulus, stored as p-1 eigencomponents
// in the Z basis.
struct LambdaElement {
    LambdaRing R;
    Modulus mod;
    std::vector<Poly> comp;

    static LambdaElement zero(const LambdaRing& R, const Modulus& M);
    static LambdaElement constant(const LambdaRing& R, const Modulus& M, const Scalar& c);
    // the same Z-polynomial in every component (group ring element supported on Gamma_1)
    static LambdaElement from_gamma_poly(const LambdaRing& R, const Modulus& M, const Poly& z);
    static LambdaElement from_x_poly(const LambdaRing& R, const Modulus& M, const Poly& x);

    void reduce();
    LambdaElement reduced(const Modulus& M) const;   // M must divide mod
    bool integral() const;
    long min_val() const;
    bool is_zero() const;
    int level() const { return mod.level(); }
    LambdaElement with_prec(long prec) const;
};

LambdaElement operator+(const LambdaElement& a, const LambdaElement& b);
LambdaElement operator-(const LambdaElement& a, const LambdaElement& b);
LambdaElement operator*(const LambdaElement& a, const LambdaElement& b);
LambdaElement operator*(const LambdaElement& a, const Scalar& s);
bool same(const LambdaElement& a, const LambdaElement& b);

LambdaElement tw(const LambdaElement& a, long s);

struct FrakRep {
    Poly N;      // Z basis
    long scale_exp;   // scale is p^scale_exp
};
FrakRep frak_n_representative(const LambdaRing& R, int m, int n);

// Mellin transform at level (n, m): Lambda/omega_{n,m} to polynomials in
// Y = 1 + pi modulo (Y^(p^(n+1)) - 1)^m.
Poly mellin_forward(const LambdaElement& a, int n, int m);
LambdaElement mellin_inverse(const LambdaRing& R, const Poly& y, int n, int m);
// Coefficients of y in the basis Y^r (Y^N - 1)^j, r < N, j < m.
std::vector<std::vector<Scalar>> mellin_table(const Poly& y, long N, int m);
Poly from_mellin_table(const Field* F, const std::vector<std::vector<Scalar>>& G, long N);
Poly reduce_pi_power(const Poly& y, long N, int m);
bool psi_zero(const Poly& y, long N, int m, long floor);

struct MellinReport {
    bool pass = true;
    int samples = 0;
    long min_quotient_val = INF;
    std::string witness;
};
MellinReport mellin_divisibility_check(const LambdaRing& R, int n, int m, int samples, unsigned long seed,
                                  bool perturb = false);

// Character chi^j theta, theta of conductor p^c with Delta part omega^i0;
// theta(gamma) = zeta^b for a fixed primitive p^(c-1)-th root zeta (c >= 2).
struct CharSpec {
    int j = 0;
    int c = 0;
    long i0 = 0;
    long b = 1;
};
Scalar eval_character(const LambdaElement& a, const CharSpec& chi);

// Coherent tower of finite-level elements with a growth bound.
struct DistApproximant {
    std::vector<LambdaElement> levels;   // level n reduced modulo omega_{n,m}
    int m = 1;
    mpq_class growth_order = 0;
    mpq_class c = 0;

    bool coherent(std::string* why = nullptr) const;
    bool growth_ok(std::string* why = nullptr) const;
};

}  // namespace rs
