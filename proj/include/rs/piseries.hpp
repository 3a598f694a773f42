#pragma once

#include "rs/field.hpp"

namespace rs {

// Power series in pi known modulo pi^N.
struct PiSeries {
    const Field* F = nullptr;
    long N = 0;
    Poly c;   // c.n == N

    PiSeries() = default;
    PiSeries(const Field* F_, long N_) : F(F_), N(N_), c(F_, N_) {}
    static PiSeries from_poly(const Poly& a, long N);
    static PiSeries pi(const Field* F, long N);
    static PiSeries constant(const Scalar& s, long N);
    Scalar coef(long k) const { return c.coef(k); }
    long valuation_pi() const;   // pi-adic order, N if zero
    long min_val() const { return c.min_val_floor(); }
    bool is_zero() const { return c.is_zero(); }
};

PiSeries operator+(const PiSeries& a, const PiSeries& b);
PiSeries operator-(const PiSeries& a, const PiSeries& b);
PiSeries operator*(const PiSeries& a, const PiSeries& b);
PiSeries operator*(const PiSeries& a, const Scalar& s);
PiSeries inverse(const PiSeries& a);   // constant term must be a unit

PiSeries substitute(const PiSeries& f, const PiSeries& g);
PiSeries frobenius_phi(const PiSeries& f);
// Applies psi to the known coefficients as a polynomial; the result is kept
// modulo pi^floor(N/p).
PiSeries psi(const PiSeries& f);
PiSeries gamma_act(const Scalar& a, const PiSeries& f);
PiSeries q_series(const Field* F, long N);
PiSeries mu_series(const Field* F, long N);

// Change of variable Y = 1 + pi, on exact polynomials.
Poly pi_to_y(const Poly& a);
Poly y_to_pi(const Poly& a);
// phi on polynomials in Y: Y -> Y^p
Poly phi_y(const Poly& a, long p);

}  // namespace rs
