#include "rs/piseries.hpp"

#include <algorithm>

#include "rs/roots.hpp"

namespace rs {

namespace {
Poly truncate(Poly a, long N) {
    if (a.n > N) a.resize(N);
    if (a.n < N) a.resize(N);
    return a;
}

long vp_factorial(long n, long p) {
    long v = 0;
    for (long q = p; q <= n; q *= p) v += n / q;
    return v;
}
}  // namespace

PiSeries PiSeries::from_poly(const Poly& a, long N) {
    PiSeries s;
    s.F = a.F;
    s.N = N;
    s.c = truncate(a, N);
    return s;
}

PiSeries PiSeries::pi(const Field* F, long N) {
    PiSeries s(F, N);
    if (N > 1) s.c.c[F->d] = 1;
    return s;
}

PiSeries PiSeries::constant(const Scalar& a, long N) {
    return from_poly(Poly::from_scalars(a.F, {a}), N);
}

long PiSeries::valuation_pi() const {
    for (long k = 0; k < N; ++k)
        if (!c.coef(k).is_zero()) return k;
    return N;
}

PiSeries operator+(const PiSeries& a, const PiSeries& b) {
    long N = std::min(a.N, b.N);
    return PiSeries::from_poly(truncate(a.c, N) + truncate(b.c, N), N);
}

PiSeries operator-(const PiSeries& a, const PiSeries& b) {
    long N = std::min(a.N, b.N);
    return PiSeries::from_poly(truncate(a.c, N) - truncate(b.c, N), N);
}

PiSeries operator*(const PiSeries& a, const PiSeries& b) {
    long N = std::min(a.N, b.N);
    return PiSeries::from_poly(mul_trunc(a.c, b.c, N), N);
}

PiSeries operator*(const PiSeries& a, const Scalar& s) { return PiSeries::from_poly(a.c * s, a.N); }

PiSeries inverse(const PiSeries& a) {
    Scalar c0 = a.coef(0);
    if (c0.is_zero() || c0.val_e() != 0) fail(Err::NotAUnit, "series inverse needs a unit constant term");
    // Newton iteration b <- b (2 - a b)
    PiSeries b = PiSeries::constant(inv(c0), 1);
    long have = 1;
    while (have < a.N) {
        have = std::min(2 * have, a.N);
        PiSeries bb = PiSeries::from_poly(b.c, have);
        PiSeries ab = PiSeries::from_poly(a.c, have) * bb;
        PiSeries two = PiSeries::constant(Scalar::integer(a.F, 2), have);
        b = bb * (two - ab);
    }
    return b;
}

PiSeries substitute(const PiSeries& f, const PiSeries& g) {
    if (!g.coef(0).is_zero()) fail(Err::NonzeroConstantTerm, "substitution needs g(0) = 0");
    // result known modulo pi^min(N_g, N_f * ord(g))
    long ord = g.valuation_pi();
    long N = g.N;
    if (ord < g.N) N = std::min(N, sat_add(f.N * ord, 0));
    N = std::max<long>(N, 1);
    PiSeries acc(f.F, N);
    for (long k = f.N - 1; k >= 0; --k) {
        acc = acc * PiSeries::from_poly(g.c, N);
        acc = acc + PiSeries::constant(f.coef(k), N);
    }
    return acc;
}

Poly pi_to_y(const Poly& a) { return taylor_shift(a, Scalar::integer(a.F, -1)); }
Poly y_to_pi(const Poly& a) { return taylor_shift(a, Scalar::one(a.F)); }
Poly phi_y(const Poly& a, long p) { return subst_pow(a, p); }

PiSeries frobenius_phi(const PiSeries& f) {
    // F(Y^p - 1): exact on the polynomial, and pi^N | phi(pi)^N
    Poly y = pi_to_y(f.c);
    Poly r = y_to_pi(phi_y(y, f.F->p));
    return PiSeries::from_poly(r, f.N);
}

PiSeries psi(const PiSeries& f) {
    const Field* F = f.F;
    const long p = F->p;
    if (f.N < p) fail(Err::PrecisionExhausted, "psi needs at least p known coefficients");
    const long prec = f.c.exact() ? default_prec() : f.c.pr;
    const Composite& C = composite(F->e > 1 ? unramified_field(p, F->f) : F, 1, prec);
    Poly y = pi_to_y(f.c);
    // (phi o psi)(F)(Y) = (1/p) sum_zeta F(zeta Y): average zeta^a over the p-th roots of unity
    std::vector<Scalar> roots;
    Scalar z = Scalar::one(C.C);
    for (long c = 0; c < p; ++c) {
        roots.push_back(z);
        z = z * C.zeta;
    }
    std::vector<Scalar> avg(p);
    for (long r = 0; r < p; ++r) {
        Scalar s = Scalar::zero(C.C);
        for (long c = 0; c < p; ++c) s = s + pow(roots[c], r);
        avg[r] = s;   // p or 0, computed in E(zeta_p)
    }
    const long M = (y.n + p - 1) / p;
    std::vector<Scalar> out(std::max<long>(M, 1), Scalar::zero(F));
    const int fK = F->f;
    for (long a = 0; a < y.n; ++a) {
        const Scalar& w = avg[a % p];
        // coordinate 0..f-1 of w are its K-part; the rest must vanish
        for (int i = fK; i < C.C->d; ++i)
            if (w.c[i] != 0) fail(Err::CheckFailed, "root-of-unity average is not in the base field");
        Scalar wK(F, INF);
        for (int i = 0; i < fK; ++i) wK.c[i] = w.c[i];
        wK.ex = w.ex;
        if (wK.is_zero()) continue;
        Scalar term = y.coef(a) * wK;
        if (a % p != 0) {
            if (!term.is_zero()) fail(Err::CheckFailed, "averaging left a non-p-divisible exponent");
            continue;
        }
        out[a / p] = out[a / p] + shift_p(term, -1);
    }
    Poly g = y_to_pi(Poly::from_scalars(F, out));
    long N = f.N / p;
    return PiSeries::from_poly(g, N);
}

PiSeries gamma_act(const Scalar& a, const PiSeries& f) {
    const Field* F = f.F;
    if (!a.in_prime_field() || a.is_zero() || a.val_e() != 0) fail(Err::NotZpUnit, "gamma_act needs a unit of Z_p");
    const long N = f.N;
    const long p = F->p;
    // binomial series (1+pi)^a - 1 modulo pi^N via an integer representative of a
    long prec = a.exact() ? default_prec() : a.pr;
    if (f.c.exact() == false) prec = std::min(prec, f.c.pr);
    Poly g(F, N);
    if (a.exact() && a.ex >= 0) {
        mpz_class A = a.c[0] * F->ppow(a.ex);
        if (A > 0) {
            for (long k = 1; k < N; ++k) {
                mpz_class b;
                mpz_bin_ui(b.get_mpz_t(), A.get_mpz_t(), k);
                g.c[k * F->d] = b;
            }
            return substitute(f, PiSeries::from_poly(g, N));
        }
    }
    const long extra = vp_factorial(N, p) + 1;
    mpz_class A = a.as_integer_mod(prec + extra);
    for (long k = 1; k < N; ++k) {
        mpz_class b;
        mpz_bin_ui(b.get_mpz_t(), A.get_mpz_t(), k);
        g.c[k * F->d] = b;
    }
    g.pr = prec;
    g.reduce();
    return substitute(f, PiSeries::from_poly(g, N));
}

PiSeries q_series(const Field* F, long N) {
    const long p = F->p;
    std::vector<mpz_class> c(p);
    for (long i = 0; i < p; ++i) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), p, i + 1);
        c[i] = b;
    }
    return PiSeries::from_poly(Poly::from_ints(F, c), N);
}

PiSeries mu_series(const Field* F, long N) {
    // mu^-1 = (q - pi^(p-1))/p has integer coefficients and constant term 1
    const long p = F->p;
    std::vector<mpz_class> d(p - 1);
    for (long i = 0; i < p - 1; ++i) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), p, i + 1);
        d[i] = b / p;
    }
    std::vector<mpz_class> mu(N);
    mu[0] = 1;
    for (long k = 1; k < N; ++k) {
        mpz_class s = 0;
        for (long i = 1; i <= std::min(k, p - 2); ++i) s += d[i] * mu[k - i];
        mu[k] = -s;
    }
    return PiSeries::from_poly(Poly::from_ints(F, mu), N);
}

}  // namespace rs
