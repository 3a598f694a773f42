#include <random>

#include "doctest.h"
#include "rs/lambda.hpp"
#include "rs/roots.hpp"

using namespace rs;

namespace {
LambdaRing ring(long p, long u = 0) { return LambdaRing(prime_field(p), u ? u : p + 1, 40); }

LambdaElement random_element(const LambdaRing& R, const Modulus& M, std::mt19937_64& rng, bool uniform) {
    LambdaElement a = LambdaElement::zero(R, M);
    const long d = M.degree(R.p);
    for (size_t i = 0; i < a.comp.size(); ++i) {
        if (uniform && i > 0) {
            a.comp[i] = a.comp[0];
            continue;
        }
        std::vector<mpz_class> v(d);
        for (auto& c : v) c = (long)(rng() % 41) - 20;
        a.comp[i] = Poly::from_ints(R.F, v);
    }
    return a;
}

Poly ymono(const Field* F, long a) { return Poly::monomial(F, a, Scalar::one(F)); }

bool poly_same(const Poly& a, const Poly& b) { return (a - b).is_zero(); }
}  // namespace

TEST_CASE("cyclotomic constructors") {
    const Field* F = prime_field(3);
    CHECK(poly_same(omega_x(F, 0), Poly::from_ints(F, {0, 1})));
    CHECK(poly_same(omega_x(F, 1), Poly::from_ints(F, {0, 3, 3, 1})));
    CHECK(poly_same(phi_x(F, 1), Poly::from_ints(F, {3, 3, 1})));
    for (long p : {3L, 5L})
        for (int n = 0; n < 3; ++n)
            for (int m = 1; m < 4; ++m) {
                LambdaRing R = ring(p);
                CHECK(modulus_z(R, Modulus::omega(n, m)).deg() == Modulus::omega(n, m).degree(p));
                long pn = 1;
                for (int k = 0; k < n; ++k) pn *= p;
                CHECK(Modulus::omega(n, m).degree(p) == m * pn);
            }
    LambdaRing R = ring(3);
    // omega_{n,1} is omega_n, in the Z variable
    CHECK(poly_same(modulus_z(R, Modulus::omega(2, 1)), x_to_z(omega_x(R.F, 2))));
    // twisted omega is the product of its twisted Phi factors
    Poly prod = tw_phi_z(R, 0, 2) * tw_phi_z(R, 1, 2) * tw_phi_z(R, 2, 2);
    prod.trim();
    CHECK(poly_same(prod, tw_omega_z(R, 2, 2)));
}

TEST_CASE("twist automorphism") {
    std::mt19937_64 rng(1);
    LambdaRing R = ring(5);
    const Modulus M = Modulus::omega(1, 2);
    LambdaElement X = LambdaElement::from_x_poly(R, M, Poly::from_ints(R.F, {0, 1}));
    LambdaElement t = tw(X, 1);
    Poly want = x_to_z(Poly::from_ints(R.F, {5, 6}));   // uX + (u - 1)
    for (auto& c : t.comp) CHECK(poly_same(c, want));
    LambdaElement c = LambdaElement::constant(R, M, Scalar::integer(R.F, 7));
    for (auto& x : tw(c, 1).comp) CHECK(poly_same(x, Poly::from_ints(R.F, {7})));
    for (int s = 0; s < 5; ++s) {
        LambdaElement a = random_element(R, M, rng, false), b = random_element(R, M, rng, false);
        CHECK(same(tw(tw(a, 1), -1), a));
        CHECK(same(tw(tw(a, 2), -2), a));
        CHECK(same(tw(a * b, 1), tw(a, 1) * tw(b, 1)));
    }
}

TEST_CASE("frak representative") {
    LambdaRing R = ring(5);
    FrakRep f = frak_n_representative(R, 1, 1);
    CHECK(poly_same(f.N, x_to_z(phi_x(R.F, 1))));
    CHECK(f.scale_exp == -1);
    FrakRep g = frak_n_representative(R, 3, 2);
    CHECK(g.N.deg() == 3 * (25 - 1));
    CHECK(g.scale_exp == -6);
    const Composite& C = composite(R.F, 1, 40);
    FrakRep h = frak_n_representative(R, 2, 1);
    Scalar z = C.embed(R.u_pow(1)) * C.zeta;
    CHECK(eval(C.embed(h.N), z).is_zero());
    for (long j = -3; j < 6; ++j) CHECK(!eval(g.N, R.u_pow(j)).is_zero());
}

TEST_CASE("Mellin transform basics") {
    LambdaRing R = ring(5);
    for (int m : {1, 3}) {
        const long N = 25;
        const Modulus M = Modulus::omega(1, m);
        LambdaElement one = LambdaElement::constant(R, M, Scalar::one(R.F));
        CHECK(poly_same(mellin_forward(one, 1, m), ymono(R.F, 1)));
        LambdaElement gam = LambdaElement::from_gamma_poly(R, M, ymono(R.F, 1));
        CHECK(poly_same(mellin_forward(gam, 1, m), reduce_pi_power(ymono(R.F, 6), N, m)));
        LambdaElement back = mellin_inverse(R, ymono(R.F, 1), 1, m);
        CHECK(same(back, one));
        for (long a : {2L, 7L, 13L, 24L}) {
            LambdaElement s = mellin_inverse(R, ymono(R.F, a), 1, m);
            CHECK(poly_same(mellin_forward(s, 1, m), reduce_pi_power(ymono(R.F, a), N, m)));
        }
    }
    CHECK_THROWS(mellin_inverse(R, ymono(R.F, 5), 1, 2));
    CHECK_THROWS(mellin_forward(LambdaElement::zero(R, Modulus::omega(0, 2)), 1, 2));
}

TEST_CASE("Mellin round trip and psi vanishing") {
    std::mt19937_64 rng(4);
    for (long p : {3L, 5L}) {
        LambdaRing R = ring(p);
        for (int n = 0; n < 3; ++n)
            for (int m : {1, 2}) {
                long N = 1;
                for (int k = 0; k <= n; ++k) N *= p;
                const Modulus M = Modulus::omega(n, m);
                for (bool uni : {true, false}) {
                    LambdaElement a = random_element(R, M, rng, uni);
                    Poly y = mellin_forward(a, n, m);
                    CHECK(psi_zero(y, N, m, R.prec));
                    CHECK(same(mellin_inverse(R, y, n, m), a));
                }
            }
    }
}

TEST_CASE("Mellin at m = 1 against the group action") {
    // independent path: sigma_{omega(t)} gamma^k -> Y^(omega(t) u^k mod p^(n+1))
    std::mt19937_64 rng(8);
    LambdaRing R = ring(5);
    const int n = 1;
    const long N = 25, P = 5;
    LambdaElement a = random_element(R, Modulus::omega(n, 1), rng, false);
    std::vector<Scalar> acc(N, Scalar::zero(R.F));
    Scalar inv4 = inv(Scalar::integer(R.F, 4)).with_prec(R.prec);
    for (long t = 1; t < 5; ++t) {
        mpz_class w = teichmuller_int(t, 5, 10);
        for (long k = 0; k < P; ++k) {
            Scalar ct = Scalar::zero(R.F);
            for (long i = 0; i < 4; ++i) ct = ct + a.comp[i].coef(k) * pow(R.teich(t), 4 - i);
            ct = ct * inv4;
            mpz_class uk;
            mpz_pow_ui(uk.get_mpz_t(), R.u.get_mpz_t(), k);
            mpz_class e = w * uk;
            mpz_class r;
            mpz_fdiv_r_ui(r.get_mpz_t(), e.get_mpz_t(), N);
            acc[r.get_si()] = acc[r.get_si()] + ct;
        }
    }
    CHECK(poly_same(mellin_forward(a, n, 1), Poly::from_scalars(R.F, acc)));
}

TEST_CASE("Mellin image divisibility characterizes the ideal") {
    LambdaRing R3 = ring(3);
    MellinReport rep = mellin_divisibility_check(R3, 1, 2, 20, 11);
    CHECK(rep.pass);
    CHECK(rep.samples == 20);
    CHECK(rep.min_quotient_val >= 0);
    CHECK_FALSE(mellin_divisibility_check(R3, 1, 2, 3, 11, true).pass);
    LambdaRing R5 = ring(5);
    CHECK(mellin_divisibility_check(R5, 0, 1, 5, 2).pass);
    CHECK(mellin_divisibility_check(R5, 2, 3, 3, 2).pass);
    // M(X) = Y^u - Y at level (0,1) is divisible by q
    LambdaElement X = LambdaElement::from_x_poly(R5, Modulus::omega(0, 1), Poly::from_ints(R5.F, {0, 1}));
    Poly y = mellin_forward(X, 0, 1);
    long rv = 0;
    quo_exact(y, Poly::from_ints(R5.F, {1, 1, 1, 1, 1}), &rv);
    CHECK(rv >= INF);
}

TEST_CASE("character evaluation") {
    LambdaRing R = ring(5);
    const Modulus M = Modulus::omega(2, 2);
    LambdaElement one = LambdaElement::constant(R, M, Scalar::one(R.F));
    CHECK(same(eval_character(one, {1, 3, 2, 1}), Scalar::one(composite(R.F, 2, 40).C)));
    for (int n = 0; n < 2; ++n) {
        LambdaElement w = LambdaElement::from_gamma_poly(R, M, tw_omega_z(R, n, 0));
        CHECK_FALSE(eval_character(w, {0, n + 2, 0, 1}).is_zero());
        CHECK(eval_character(w, {0, n + 1, 0, 1}).is_zero());
    }
    CHECK_THROWS(eval_character(one, {0, 4, 0, 1}));
    // only depends on the class modulo Tw^-j Phi_k
    std::mt19937_64 rng(2);
    LambdaElement a = random_element(R, M, rng, false);
    LambdaElement f = LambdaElement::from_gamma_poly(R, M, tw_phi_z(R, 2, 1));
    LambdaElement b = a + f * random_element(R, M, rng, false);
    CHECK(same(eval_character(a, {1, 3, 1, 2}), eval_character(b, {1, 3, 1, 2})));
    CHECK_FALSE(same(eval_character(a, {0, 3, 1, 2}), eval_character(b, {0, 3, 1, 2})));
}

TEST_CASE("distribution towers") {
    std::mt19937_64 rng(6);
    LambdaRing R = ring(5);
    LambdaElement top = random_element(R, Modulus::omega(2, 2), rng, false);
    DistApproximant D;
    D.m = 2;
    D.levels = {top.reduced(Modulus::omega(0, 2)), top.reduced(Modulus::omega(1, 2)), top};
    CHECK(D.coherent());
    CHECK(D.growth_ok());
    D.levels[1].comp[0].set(0, D.levels[1].comp[0].coef(0) + Scalar::one(R.F));
    CHECK_FALSE(D.coherent());
    D.levels[1] = D.levels[1] * Scalar::rational(R.F, mpq_class(1, 125), 40);
    CHECK_FALSE(D.growth_ok());
    D.growth_order = 3;
    CHECK(D.growth_ok());
}
