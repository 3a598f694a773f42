#include "doctest.h"
#include "rs/roots.hpp"

using namespace rs;

TEST_CASE("build_field examples") {
    auto a = build_field(5, {-1, 1});
    CHECK(a.e == 1);
    CHECK(a.f == 1);
    auto b = build_field(5, {5, 0, 1});
    CHECK(b.e == 2);
    CHECK(b.f == 1);
    CHECK(b.uniformizer.val() == mpq_class(1, 2));
    CHECK((b.generator * b.generator + Scalar::integer(b.F, 5)).is_exact_zero());
    auto c = build_field(5, {1, -1, 1});
    CHECK(c.e == 1);
    CHECK(c.f == 2);
    CHECK_THROWS_AS(build_field(2, {1, 1, 1}), Error);
    try {
        build_field(5, {1, 2, 1});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == Err::NonSquarefreePolynomial);
    }
}

TEST_CASE("hecke roots over the desk fields") {
    const long prec = 40;
    auto E = hecke_splitting_field(5, 0, 0, 1, 1, 5, 1, prec);
    CHECK(E.F->d == 4);
    const Field* F = E.F;
    auto r = hecke_roots(Scalar::integer(F, 0), Scalar::one(F), 0, E, prec);
    CHECK(r.alpha.val() == mpq_class(1, 2));
    CHECK(r.beta.val() == mpq_class(1, 2));
    CHECK((r.alpha * r.beta - Scalar::integer(F, 5)).val_floor() >= prec - 2);
    CHECK((r.alpha + r.beta).val_floor() >= prec - 2);
    auto s = hecke_roots(Scalar::integer(F, 5), Scalar::one(F), 1, E, prec);
    CHECK(s.alpha.val() == 1);
    CHECK(s.beta.val() == 1);
    CHECK((s.alpha * s.beta - Scalar::integer(F, 25)).val_floor() >= prec - 2);
    CHECK((s.alpha + s.beta - Scalar::integer(F, 5)).val_floor() >= prec - 2);
    CHECK_THROWS_AS(hecke_roots(Scalar::integer(F, 3), Scalar::one(F), 1, E, prec), Error);
}

TEST_CASE("hecke roots at the second point") {
    const long prec = 40;
    auto E = hecke_splitting_field(7, 1, 7, 1, 2, 0, 1, prec);
    CHECK(E.F->d == 2);
    auto r = hecke_roots(Scalar::integer(E.F, 7), Scalar::one(E.F), 1, E, prec);
    CHECK(r.alpha.val() == 1);
    auto s = hecke_roots(Scalar::integer(E.F, 0), Scalar::one(E.F), 2, E, prec);
    CHECK(s.alpha.val() == mpq_class(3, 2));
}

TEST_CASE("teichmuller") {
    const Field* Q5 = prime_field(5);
    CHECK(same(teichmuller(Scalar::integer(Q5, 1), 30), Scalar::one(Q5)));
    CHECK(same(teichmuller(Scalar::integer(Q5, 4), 30), Scalar::integer(Q5, -1)));
    for (long a = 1; a < 5; ++a) {
        Scalar t = teichmuller(Scalar::integer(Q5, a), 30);
        CHECK((pow(t, 4) - Scalar::one(Q5)).val_floor() >= 29);
        for (long b = 1; b < 5; ++b) {
            Scalar tb = teichmuller(Scalar::integer(Q5, b), 30);
            Scalar tab = teichmuller(Scalar::integer(Q5, a * b), 30);
            CHECK((t * tb - tab).val_floor() >= 29);
        }
        mpz_class ti = teichmuller_int(a, 5, 30);
        CHECK((t - Scalar::integer(Q5, ti)).val_floor() >= 29);
    }
    const Field* Q25 = unramified_field(5, 2);
    Scalar x = Scalar::basis(Q25, 1, 0) + Scalar::integer(Q25, 2);
    Scalar t = teichmuller(x, 30);
    CHECK((pow(t, 24) - Scalar::one(Q25)).val_floor() >= 29);
}

TEST_CASE("p-adic log") {
    // log(u^2) = 2 log(u)
    mpz_class l1 = zp_log(6, 5, 40), l2 = zp_log(36, 5, 40);
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), 5, 40);
    CHECK(((2 * l1 - l2) % m) == 0);
    CHECK(vp(l1, 5) == 1);
}

TEST_CASE("roots of unity") {
    const Field* Q5 = prime_field(5);
    CHECK(same(root_of_unity(Q5, 0, 30), Scalar::one(Q5)));
    Scalar z = root_of_unity(Q5, 1, 30);
    Scalar s = Scalar::zero(z.F);
    for (int i = 0; i < 5; ++i) s = s + pow(z, i);
    CHECK(s.is_zero());
    Scalar z2 = root_of_unity(Q5, 2, 30);
    CHECK(!(pow(z2, 5) - Scalar::one(z2.F)).is_zero());
    CHECK((pow(z2, 25) - Scalar::one(z2.F)).is_zero());
    auto E = hecke_splitting_field(5, 0, 0, 1, 1, 5, 1, 40);
    const Composite& C = composite(E.F, 1, 40);
    Scalar y = C.embed(Scalar::basis(E.F, 0, 1));
    CHECK((y * y + Scalar::integer(C.C, E.F->eis[0][0])).val_floor() >= 35);
}
