#include <random>

#include "doctest.h"
#include "rs/field.hpp"

using namespace rs;

namespace {
const Field* ramified5() { return make_field(5, {0, 1}, {{5}, {0}, {1}}, "Q5(sqrt-5)"); }
const Field* mixed5() {
    const Field* K = unramified_field(5, 2);
    return make_field(5, K->kpoly, {{-5, 0}, {0, 0}, {1, 0}}, "Q25(sqrt5)");
}

Scalar random_scalar(const Field* F, std::mt19937_64& rng, long prec) {
    Scalar s(F, INF);
    for (auto& x : s.c) x = (long)(rng() % 100000) - 50000;
    s.ex = (long)(rng() % 7) - 3;
    s.pr = prec;
    s.reduce();
    return s;
}
}  // namespace

TEST_CASE("valuation laws") {
    std::mt19937_64 rng(7);
    for (const Field* F : {prime_field(5), unramified_field(5, 2), ramified5()}) {
        for (int t = 0; t < 200; ++t) {
            Scalar x = random_scalar(F, rng, 40), y = random_scalar(F, rng, 40);
            if (x.is_zero() || y.is_zero()) continue;
            CHECK((x * y).val() == x.val() + y.val());
            Scalar s = x + y;
            if (!s.is_zero()) CHECK(s.val() >= std::min(x.val(), y.val()));
            if (x.val() != y.val()) CHECK(s.val() == std::min(x.val(), y.val()));
        }
    }
}

TEST_CASE("inverse precision") {
    std::mt19937_64 rng(11);
    for (const Field* F : {prime_field(5), unramified_field(5, 2), ramified5(), unramified_field(7, 3), mixed5()}) {
        for (int t = 0; t < 100; ++t) {
            Scalar x = random_scalar(F, rng, 50);
            if (x.is_zero()) continue;
            Scalar z = x * inv(x) - Scalar::one(F);
            long need = 50 - x.val_floor() - 1;
            CHECK((z.is_zero() || z.val_floor() >= need));
            CHECK(z.pr >= need);
        }
    }
}

TEST_CASE("exact inverse in a ramified field") {
    const Field* F = ramified5();
    Scalar y = Scalar::uniformizer(F);
    CHECK(y.val() == mpq_class(1, 2));
    Scalar z = y * inv(y) - Scalar::one(F);
    CHECK(z.is_zero());
    CHECK((y * y + Scalar::integer(F, 5)).is_exact_zero());
}

TEST_CASE("Kronecker product agrees with schoolbook") {
    std::mt19937_64 rng(3);
    for (const Field* F : {prime_field(5), unramified_field(5, 2), ramified5(), mixed5()}) {
        std::vector<Scalar> a, b;
        for (int i = 0; i < 40; ++i) a.push_back(random_scalar(F, rng, INF));
        for (int i = 0; i < 33; ++i) b.push_back(random_scalar(F, rng, INF));
        Poly A = Poly::from_scalars(F, a), B = Poly::from_scalars(F, b);
        Poly C = A * B;
        for (long k = 0; k < C.n; ++k) {
            Scalar acc = Scalar::zero(F);
            for (long i = 0; i < (long)a.size(); ++i)
                if (k - i >= 0 && k - i < (long)b.size()) acc = acc + a[i] * b[k - i];
            CHECK((C.coef(k) - acc).is_exact_zero());
        }
    }
}

TEST_CASE("division by a monic polynomial") {
    const Field* F = unramified_field(5, 2);
    std::mt19937_64 rng(5);
    std::vector<Scalar> a, m;
    for (int i = 0; i < 30; ++i) a.push_back(random_scalar(F, rng, INF));
    for (int i = 0; i < 7; ++i) m.push_back(random_scalar(F, rng, INF).with_prec(INF));
    for (auto& s : m) { s.ex = std::max<long>(s.ex, 0); }
    m.push_back(Scalar::one(F));
    Poly A = Poly::from_scalars(F, a), M = Poly::from_scalars(F, m);
    Poly q, r;
    divrem(A, M, &q, &r);
    CHECK(r.deg() < 7);
    CHECK((q * M + r - A).is_zero());
}

TEST_CASE("taylor shift") {
    const Field* F = prime_field(7);
    Poly a = Poly::from_ints(F, {3, -1, 4, 1, -5});
    for (long s : {1L, -1L, 3L}) {
        Poly b = taylor_shift(a, Scalar::integer(F, s));
        for (long x = -3; x < 4; ++x) {
            Scalar X = Scalar::integer(F, x);
            CHECK((eval(b, X) - eval(a, X + Scalar::integer(F, s))).is_exact_zero());
        }
    }
}
