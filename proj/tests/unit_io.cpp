#include "doctest.h"
#include "rs/io.hpp"

using namespace rs;

namespace {
const LogMatrixBundle& desk() {
    static LogMatrixBundle B = [] {
        FormPair pr = make_form_pair(5, 0, 1, 0, 5, 1, 1, 65);
        return build_bundle(pr, 6, 2, 60, 5);
    }();
    return B;
}
long val_of(const LambdaElement& a) { return a.is_zero() ? INF : a.min_val(); }
}  // namespace

TEST_CASE("scalar JSON is canonical and round-trips") {
    const Field* F = prime_field(5);
    Scalar a = Scalar::rational(F, mpq_class(7, 25), 20);
    json j = scalar_json(a);
    CHECK(j["exponent"] == -2);
    CHECK(j["abs_precision"] == 20);
    CHECK(j["coords"][0] == "7");
    CHECK(same(scalar_from_json(j, F), a));
    // the same value written two ways serializes identically
    Scalar b = Scalar::integer(F, 7 + 5 * 5 * 5 * 5 * 5 * 3, 20);
    b = shift_p(b, -2);
    b = b.with_prec(20);
    CHECK(scalar_json(Scalar::rational(F, mpq_class(7, 25), 20).with_prec(3)) == scalar_json(b.with_prec(3)));

    const Field* E = desk().pair.E.F;
    Scalar al = desk().pair.alpha_f;
    json ja = scalar_json(al);
    CHECK(ja["coords"].size() == (size_t)E->d);
    CHECK(same(scalar_from_json(ja, E), al));
    CHECK_THROWS_AS(scalar_from_json(ja, F), Error);
    CHECK(val_json(INF) == "inf");
    CHECK(val_from_json(json("inf")) == INF);
}

TEST_CASE("Lambda elements round-trip through the X basis") {
    const auto& B = desk();
    SignedQuadruple x = random_signed(B, 2, 3);
    json j = lambda_json(x.F[1]);
    CHECK(j.size() == 4);
    CHECK(j[2]["delta_component"] == 2);
    CHECK(j[0]["modulus_spec"]["n"] == 2);
    CHECK(j[0]["modulus_spec"]["m"] == 3);
    LambdaElement back = lambda_from_json(j, B.R, B.RE);
    CHECK(back.mod == x.F[1].mod);
    CHECK(val_of(back - x.F[1]) >= INF);

    json bad = j;
    bad[1]["u"] = "11";
    CHECK_THROWS_AS(lambda_from_json(bad, B.R, B.RE), Error);
}

TEST_CASE("quadruple documents round-trip") {
    const auto& B = desk();
    RunConfig c;
    AnalyticQuadruple F = coleman_decompose(random_signed(B, 2, 4), B);
    json j = analytic_json(F, c);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["ordering"][1] == "ab");
    AnalyticQuadruple G = analytic_from_json(json::parse(j.dump()), B);
    for (int i = 0; i < 4; ++i) {
        CHECK(G.F[i].c == F.F[i].c);
        for (int n = 0; n <= 2; ++n) CHECK(val_of(G.at(i, n) - F.at(i, n)) >= B.floor());
    }
    json wrong = j;
    wrong["ordering"][0] = "bb";
    CHECK_THROWS_AS(analytic_from_json(wrong, B), Error);

    SplitResult r = signed_split(F, B);
    json s = signed_json(r.x, &r.cert, c);
    CHECK(s["ordering"][1] == "#♭");
    CHECK(s["certificate"]["per_level_residual_valuations"].size() == 3);
    SignedQuadruple y = signed_from_json(s, B);
    for (int i = 0; i < 4; ++i) CHECK(val_of(y.F[i] - r.x.F[i]) >= B.floor());
}

TEST_CASE("bundle document carries the ledger") {
    const auto& B = desk();
    json j = bundle_json(B, RunConfig{});
    CHECK(j["kind"] == "log_matrix_bundle");
    CHECK(j["ledger"]["all_pass"] == true);
    CHECK(j["ledger"]["checks"].size() == B.ledger.size());
    CHECK(j["levels"].size() == 3);
    CHECK(j["matrices"]["A"].size() == 4);
    CHECK(j["form_pair"]["field"]["ramification"].get<int>() * j["form_pair"]["field"]["residue_degree"].get<int>() == 4);
    CHECK(j.dump() == bundle_json(B, RunConfig{}).dump());
}
