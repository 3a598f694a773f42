#include <random>

#include "doctest.h"
#include "rs/wach.hpp"

using namespace rs;

namespace {
const LogMatrixBundle& desk() {
    static LogMatrixBundle B = [] {
        set_default_prec(65);
        FormPair pr = make_form_pair(5, 0, 1, 0, 5, 1, 1, 65);
        return build_bundle(pr, 6, 2, 60, 5);
    }();
    return B;
}

Scalar q(const Field* F, long a, long b = 1) { return Scalar::rational(F, mpq_class(a, b), 80); }
}  // namespace

TEST_CASE("form pair validation") {
    CHECK_THROWS_AS(make_form_pair(2, 0, 0, 0, 0, 1, 1, 20), Error);
    CHECK_THROWS_AS(make_form_pair(3, 0, 1, 0, 3, 1, 1, 20), Error);   // p <= kf+kg+2
    CHECK_THROWS_AS(make_form_pair(5, 0, 1, 1, 5, 1, 1, 20), Error);   // ordinary
    CHECK_THROWS_AS(make_form_pair(5, 0, 1, 0, 5, 5, 1, 20), Error);   // eps not a unit
    try {
        make_form_pair(5, 0, 1, 1, 5, 1, 1, 20);
    } catch (const Error& e) {
        CHECK(e.kind() == Err::OrdinaryForm);
    }
}

TEST_CASE("Frobenius matrices at the desk point") {
    const auto& B = desk();
    const Field* F = prime_field(5);
    CHECK(same(B.Af[0][0], Scalar::zero(F)));
    CHECK(same(B.Af[0][1], q(F, -1, 5)));
    CHECK(same(B.Af[1][0], Scalar::one(F)));
    CHECK(same(B.Af[1][1], Scalar::zero(F)));
    CHECK(same(det(B.A0), Scalar::one(F)));
    const FormPair& pr = B.pair;
    Scalar prod = pr.alpha_f * pr.beta_f * pr.alpha_g * pr.beta_g;
    CHECK(same(embed_prime(pr.E.F, det(B.A)), inv(prod * prod)));
    CHECK(same(prod, Scalar::integer(pr.E.F, 125)));

    SMat lhs = B.Qinv * embed_mat(pr.E.F, B.A) * B.Q;
    CHECK(smat_same(lhs, B.D));
    const Scalar lam[4] = {pr.alpha_f * pr.alpha_g, pr.alpha_f * pr.beta_g, pr.beta_f * pr.alpha_g,
                           pr.beta_f * pr.beta_g};
    for (int i = 0; i < 4; ++i) {
        CHECK(B.D[i][i].val() == -lam[i].val());
        CHECK(same(B.D[i][i] * lam[i], Scalar::one(pr.E.F)));
    }
}

TEST_CASE("the A matrix is the tensor square of the single-form matrices up to ordering") {
    const auto& B = desk();
    // v2 = phi w_f (x) w_g, v3 = w_f (x) phi w_g
    const int perm[4] = {0, 2, 1, 3};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int a = perm[i], b = perm[j];
            Scalar k = B.Af[a / 2][b / 2] * B.Ag[a % 2][b % 2];
            CHECK(same(B.A[i][j], k));
        }
}

TEST_CASE("displayed P and its inverse") {
    const auto& B = desk();
    for (const auto& c : B.ledger) {
        INFO(c.name << " level " << c.level << " residual " << c.residual_val);
        CHECK(c.pass);
    }
    // p^-1 row structure on the Wach normalisation as well
    int rows = 0;
    for (const auto& c : B.ledger)
        if (c.name.find("_q_power") != std::string::npos) ++rows;
    CHECK(rows == 6);
}

TEST_CASE("ledger lists every congruence level") {
    const auto& B = desk();
    auto count = [&](const std::string& n) {
        int k = 0;
        for (const auto& c : B.ledger) k += c.name == n;
        return k;
    };
    CHECK(count("functional_equation") == 2);
    CHECK(count("M_level_coherence") == 1);
    CHECK(count("Mlog_two_routes") == 3);
    CHECK(count("H_integral") == 3);
    CHECK(count("H_row4_divisibility") == 2);
    CHECK(count("Mlog_tower_coherence") == 2);
}

TEST_CASE("group ring pieces agree with the Mellin inverse") {
    const LambdaRing R(prime_field(5), 6, 50);
    std::mt19937_64 rng(7);
    for (int n = 1; n <= 2; ++n) {
        const int m = 3;
        const long N = n == 1 ? 25 : 125;
        Poly y(R.F, 3 * N + 1);
        for (long a = 1; a < y.n; a += 5) y.set(a, Scalar::integer(R.F, (long)(rng() % 21) - 10));
        LambdaElement x = mellin_inverse(R, reduce_pi_power(y, N, m), n, m);
        for (int k = 1; k <= n; ++k)
            for (long i = 0; i < m; ++i) {
                Poly w = tw_omega_z(R, k, i);
                Poly piece = group_ring_pieces(R, {y}, k, i, 1)[0];
                Poly d = rem(x.comp[0], w) - rem(piece, w);
                INFO("n=" << n << " k=" << k << " i=" << i);
                CHECK(d.min_val_floor() >= 40);
            }
    }
}

TEST_CASE("group ring lifts reject non-Gamma_1 support") {
    const LambdaRing R(prime_field(5), 6, 30);
    Poly y = Poly::monomial(R.F, 2, Scalar::one(R.F));
    CHECK_THROWS_AS(group_ring_pieces(R, {y}, 1, 0, 1), Error);
}

TEST_CASE("determinant zeros and multiplicities") {
    const auto& B = desk();
    for (int n = 1; n <= 2; ++n) {
        DetReport r = det_structure_check(B, n);
        INFO(r.detail);
        CHECK(r.vanishes);
        CHECK(r.nonzero_level0);
        CHECK(r.pass);
        CHECK(r.rows.size() == (size_t)(n * B.m()));
    }
    DetReport r = det_structure_check(B, 1);
    // kf = 0, kg = 1: twist 0 has multiplicity 3, twist 1 has 2, twists 2 and 3 have 1
    const int want[4] = {3, 2, 1, 1};
    for (const auto& row : r.rows) CHECK(row.found == want[row.i]);
}

TEST_CASE("adjugate divisibility") {
    const auto& B = desk();
    for (int n = 1; n <= 2; ++n) {
        AdjReport r = adj_divisibility_check(B, n);
        INFO(r.detail);
        CHECK(r.literal);
        CHECK(r.fattened);
    }
    // a random level-1 matrix is not divisible
    std::mt19937_64 rng(3);
    Modulus M = Modulus::omega(1, B.m());
    LMat X(4, std::vector<LambdaElement>(4));
    for (auto& row : X)
        for (auto& x : row) {
            std::vector<mpz_class> v(M.degree(5));
            for (auto& c : v) c = (long)(rng() % 11) - 5;
            x = LambdaElement::from_gamma_poly(B.R, M, Poly::from_ints(B.R.F, v));
        }
    CHECK_FALSE(adj_literal_divisible(X, Modulus::frak(1, 2), B.R, B.floor()));
    CHECK(adj_literal_divisible(B.Mlog[1], Modulus::frak(1, 2), B.R, B.floor()));
}

TEST_CASE("growth of Q^-1 M_log") {
    const auto& B = desk();
    for (int n = 0; n <= 2; ++n) {
        GrowthReport r = growth_check(B, n);
        CHECK(r.H_integral);
        for (const auto& row : r.rows) {
            INFO("n=" << n << " row " << row.index << " val " << row.min_val << " bound " << row.bound);
            CHECK(row.pass);
        }
    }
}

TEST_CASE("filtration generators") {
    const auto& B = desk();
    CHECK(filtration_generators(B.pair, 0) == std::vector<int>{0});
    CHECK(filtration_generators(B.pair, 1) == std::vector<int>{0, 1});
    CHECK(filtration_generators(B.pair, 2) == std::vector<int>{0, 1, 2});
    CHECK(filtration_generators(B.pair, 3) == std::vector<int>{0, 1, 2, 3});
}
