#include <random>

#include "doctest.h"
#include "rs/piseries.hpp"

using namespace rs;

namespace {
PiSeries random_series(const Field* F, long N, std::mt19937_64& rng) {
    std::vector<mpz_class> v(N);
    for (auto& x : v) x = (long)(rng() % 201) - 100;
    return PiSeries::from_poly(Poly::from_ints(F, v), N);
}

bool agree(const PiSeries& a, const PiSeries& b, long N) {
    for (long k = 0; k < N; ++k)
        if (!same(a.coef(k), b.coef(k))) return false;
    return true;
}
}  // namespace

TEST_CASE("phi of pi for p = 3") {
    const Field* F = prime_field(3);
    PiSeries f = frobenius_phi(PiSeries::pi(F, 6));
    std::vector<long> want = {0, 3, 3, 1, 0, 0};
    for (long k = 0; k < 6; ++k) CHECK(same(f.coef(k), Scalar::integer(F, want[k])));
}

TEST_CASE("psi inverts phi and kills 1 + pi") {
    std::mt19937_64 rng(3);
    for (long p : {3L, 5L}) {
        const Field* F = prime_field(p);
        for (int t = 0; t < 5; ++t) {
            PiSeries f = random_series(F, 12, rng);
            PiSeries g = psi(frobenius_phi(PiSeries::from_poly(f.c, 12 * p)));
            CHECK(g.N == 12);
            CHECK(agree(g, f, g.N));
        }
        PiSeries y = PiSeries::from_poly(Poly::from_ints(F, {1, 1}), 3 * p);
        CHECK(psi(y).is_zero());
    }
}

TEST_CASE("projection formula") {
    std::mt19937_64 rng(5);
    const Field* F = prime_field(5);
    PiSeries f = random_series(F, 8, rng), g = random_series(F, 8, rng);
    PiSeries lhs = psi(frobenius_phi(PiSeries::from_poly(f.c, 60)) * PiSeries::from_poly(g.c, 60));
    PiSeries rhs = f * psi(PiSeries::from_poly(g.c, 60));
    CHECK(std::min(lhs.N, rhs.N) == 8);
    CHECK(agree(lhs, rhs, std::min(lhs.N, rhs.N)));
}

TEST_CASE("gamma action") {
    std::mt19937_64 rng(9);
    const Field* F = prime_field(5);
    PiSeries f = random_series(F, 10, rng);
    Scalar a = Scalar::integer(F, 6), b = Scalar::integer(F, 7);
    CHECK(agree(gamma_act(a, gamma_act(b, f)), gamma_act(a * b, f), 10));
    CHECK(agree(gamma_act(a, frobenius_phi(f)), frobenius_phi(gamma_act(a, f)), 10));
    Scalar minus = Scalar::integer(F, -1);
    CHECK(agree(gamma_act(minus, gamma_act(minus, f)), f, 10));
    Scalar inv6 = inv(Scalar::integer(F, 6)).with_prec(40);
    PiSeries h = gamma_act(inv6, gamma_act(a, f));
    for (long k = 0; k < 10; ++k) {
        Scalar d = h.coef(k) - f.coef(k);
        CHECK((d.is_zero() || d.val_floor() >= 30));
    }
    CHECK_THROWS(gamma_act(Scalar::integer(F, 5), f));
}

TEST_CASE("mu times q - pi^(p-1) is p") {
    for (long p : {3L, 5L, 7L}) {
        const Field* F = prime_field(p);
        long N = 30;
        PiSeries q = q_series(F, N);
        PiSeries pp = PiSeries::pi(F, N);
        PiSeries pk = PiSeries::constant(Scalar::one(F), N);
        for (long i = 0; i < p - 1; ++i) pk = pk * pp;
        PiSeries r = mu_series(F, N) * (q - pk);
        CHECK(agree(r, PiSeries::constant(Scalar::integer(F, p), N), N));
        for (long k = 0; k < N; ++k) CHECK(mu_series(F, N).coef(k).is_integral());
    }
}

TEST_CASE("substitution needs zero constant term") {
    const Field* F = prime_field(5);
    PiSeries f = PiSeries::pi(F, 5);
    CHECK_THROWS(substitute(f, PiSeries::constant(Scalar::one(F), 5)));
}
