#pragma once

#include <gmpxx.h>

#include <climits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rs/errors.hpp"

namespace rs {

constexpr long INF = LONG_MAX / 4;

// Precision used when an exact value has to be approximated (inverses of
// exact non-trivial units, Teichmuller lifts, logarithms).
long default_prec();
void set_default_prec(long prec);

inline long sat_add(long a, long b) { return (a >= INF || b >= INF) ? INF : a + b; }

long vp(const mpz_class& x, long p);   // INF for 0
mpz_class mod_pow_p(const mpz_class& x, const mpz_class& m);

// A finite extension E = K[y]/(g(y)) of Q_p, where K = Q_p[x]/(kpoly) is
// unramified of degree f and g is Eisenstein of degree e over O_K.
// Elements are stored in the integral basis x^i y^j (index i + f*j).
class Field {
public:
    long p = 0;
    int f = 1, e = 1, d = 1;
    std::string id;

    std::vector<mpz_class> kpoly;               // f+1 coefficients, monic
    std::vector<std::vector<mpz_class>> eis;    // e+1 entries of K-coords, monic

    // What the user asked for, kept for the descriptor.
    std::vector<mpz_class> defining_poly;
    long gen_shift = 0;                         // generator of defining_poly is p^s * y (or x)
    bool gen_is_x = false;

    int rf = 1, re = 1;                         // 2f-1, 2e-1
    // reduction of the raw monomial x^i y^j (i < rf, j < re) to coordinates
    std::vector<std::vector<std::pair<int, mpz_class>>> red;

    const mpz_class& ppow(long k) const;

    // Multiply raw d-vectors; result not reduced modulo anything.
    void mul_raw(const mpz_class* a, const mpz_class* b, mpz_class* out) const;
    void reduce_raw(const mpz_class* raw, mpz_class* out) const;   // raw has rf*re entries

    // K arithmetic on f-vectors (exact integers)
    std::vector<mpz_class> kmul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const;

    bool is_prime_field() const { return d == 1; }

private:
    const std::vector<mpz_class>* pw_ = nullptr;
    friend const Field* make_field(long, std::vector<mpz_class>, std::vector<std::vector<mpz_class>>,
                                   std::string);
};

// Registry-owned; never freed.
const Field* make_field(long p, std::vector<mpz_class> kpoly, std::vector<std::vector<mpz_class>> eis,
                        std::string id);
const Field* prime_field(long p);
const Field* unramified_field(long p, int f);   // canonical Q_{p^f}

// ---------------------------------------------------------------- Scalar

class Scalar {
public:
    const Field* F = nullptr;
    long ex = 0;       // value = p^ex * sum c[k] b_k
    long pr = INF;     // absolute precision in digits of p
    std::vector<mpz_class> c;

    Scalar() = default;
    explicit Scalar(const Field* F_, long prec = INF) : F(F_), ex(0), pr(prec), c(F_->d) {
        if (pr < INF) ex = std::min<long>(0, pr);
    }

    static Scalar zero(const Field* F, long prec = INF) { return Scalar(F, prec); }
    static Scalar one(const Field* F) { return integer(F, 1); }
    static Scalar integer(const Field* F, const mpz_class& v, long prec = INF);
    static Scalar rational(const Field* F, const mpq_class& v, long prec);
    static Scalar basis(const Field* F, int i, int j);   // x^i y^j
    static Scalar uniformizer(const Field* F);   // y if ramified, p otherwise

    bool exact() const { return pr >= INF; }
    long val_e() const;                 // valuation in units of 1/e, INF for zero
    mpq_class val() const;              // valuation as a rational (INF -> huge)
    long val_floor() const;             // floor of the valuation, INF for zero
    bool is_zero() const { return val_e() >= INF; }
    bool is_exact_zero() const;
    bool is_integral() const { return val_e() >= 0; }

    void reduce();                      // canonical form
    void normalize();                   // pull common p-power into ex
    Scalar with_prec(long prec) const;  // lower the precision
    Scalar lifted(long prec) const;     // treat as an approximation at this precision

    // residue of an integral element in F_q, as f integers mod p
    std::vector<long> residue() const;
    bool in_prime_field() const;        // all coords but the first vanish
    mpz_class as_integer_mod(long N) const;   // prime-field element as integer mod p^N

    std::string str() const;
};

Scalar operator+(const Scalar& a, const Scalar& b);
Scalar operator-(const Scalar& a, const Scalar& b);
Scalar operator-(const Scalar& a);
Scalar operator*(const Scalar& a, const Scalar& b);
Scalar operator*(const Scalar& a, long k);
Scalar inv(const Scalar& a);
Scalar operator/(const Scalar& a, const Scalar& b);
Scalar pow(const Scalar& a, long k);
Scalar shift_p(const Scalar& a, long k);      // multiply by p^k
bool same(const Scalar& a, const Scalar& b);   // a - b zero at precision
Scalar embed_prime(const Field* F, const Scalar& a);   // Q_p element into F

// ---------------------------------------------------------------- Poly

// Dense polynomial over a field, with one exponent and one absolute
// precision shared by all coefficients.
class Poly {
public:
    const Field* F = nullptr;
    long ex = 0;
    long pr = INF;
    long n = 0;                 // number of coefficient slots
    std::vector<mpz_class> c;   // n*d mantissas

    Poly() = default;
    Poly(const Field* F_, long n_, long prec = INF)
        : F(F_), ex(prec < INF ? std::min<long>(0, prec) : 0), pr(prec), n(n_), c(n_ * F_->d) {}

    static Poly from_scalars(const Field* F, const std::vector<Scalar>& v);
    static Poly monomial(const Field* F, long k, const Scalar& a);
    static Poly from_ints(const Field* F, const std::vector<mpz_class>& v);

    bool exact() const { return pr >= INF; }
    int d() const { return F->d; }
    Scalar coef(long k) const;
    void set(long k, const Scalar& a);   // rescales if needed
    long deg() const;                    // -1 for zero
    void trim();
    void resize(long m);
    void reduce();
    long min_val_floor() const;          // INF for zero
    long min_val_e() const;
    bool is_zero() const { return min_val_e() >= INF; }
    bool mant_zero(long k) const;
    Poly with_prec(long prec) const;
    void align_ex(long new_ex);          // lower ex to new_ex
    std::vector<Scalar> scalars() const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator-(const Poly& a);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Scalar& s);
Poly mul_trunc(const Poly& a, const Poly& b, long n);       // product mod t^n
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);   // m monic
// Division by a monic polynomial with integral coefficients; no precision loss.
void divrem(const Poly& a, const Poly& m, Poly* q, Poly* r);
Poly rem(const Poly& a, const Poly& m);
Poly quo_exact(const Poly& a, const Poly& m, long* rem_val);   // rem_val: floor valuation of remainder
Scalar eval(const Poly& a, const Scalar& x);
Poly derivative(const Poly& a);
Poly shift_p(const Poly& a, long k);
Poly subst_pow(const Poly& a, long k);   // a(t^k)
Poly taylor_shift(const Poly& a, const Scalar& s);  // a(t + s)

}  // namespace rs
