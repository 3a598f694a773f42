#include "rs/io.hpp"

#include <algorithm>

namespace rs {

namespace {
std::string zstr(const mpz_class& x) { return x.get_str(); }
std::string qstr(const mpq_class& x) { return x.get_str(); }

mpz_class zparse(const json& j) {
    mpz_class r;
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    if (!j.is_string() || r.set_str(j.get<std::string>(), 10) != 0) fail(Err::InvalidInput, "expected an integer string");
    return r;
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(Err::InvalidInput, std::string("missing key '") + key + "'");
    return j.at(key);
}

json modulus_json(const Modulus& M) {
    int m = 0;
    json factors = json::array();
    for (auto& [key, e] : M.mult) {
        m = std::max<int>(m, key.second + 1);
        factors.push_back({key.first, key.second, e});
    }
    return {{"n", M.level()}, {"m", m}, {"factors", factors}};
}

Modulus modulus_from_json(const json& j) {
    Modulus M;
    for (const auto& f : field(j, "factors")) {
        if (!f.is_array() || f.size() != 3) fail(Err::InvalidInput, "modulus factor must be [k, i, multiplicity]");
        M.mult[{f[0].get<int>(), f[1].get<long>()}] = f[2].get<int>();
    }
    return M;
}

const LambdaRing& ring_for(const std::string& id, const LambdaRing& R, const LambdaRing& RE) {
    if (id == R.F->id) return R;
    if (id == RE.F->id) return RE;
    fail(Err::InvalidInput, "unknown field id " + id);
}

json smat_json(const SMat& a) {
    json g = json::array();
    for (const auto& row : a) {
        json r = json::array();
        for (const auto& x : row) r.push_back(scalar_json(x));
        g.push_back(r);
    }
    return g;
}

json pmat_json(const PMat& a, long trunc) {
    json g = json::array();
    for (const auto& row : a) {
        json r = json::array();
        for (const auto& x : row) r.push_back(series_json(x, trunc));
        g.push_back(r);
    }
    return g;
}

json lmat_json(const LMat& a) {
    json g = json::array();
    for (const auto& row : a) {
        json r = json::array();
        for (const auto& x : row) r.push_back(lambda_json(x));
        g.push_back(r);
    }
    return g;
}

long lmat_min_val(const LMat& a) {
    long v = INF;
    for (const auto& row : a)
        for (const auto& x : row)
            if (!x.is_zero()) v = std::min(v, x.min_val());
    return v;
}

void expect_kind(const json& j, const char* kind) {
    if (field(j, "schema_version").get<int>() != kSchemaVersion) fail(Err::InvalidInput, "unsupported schema_version");
    if (field(j, "kind").get<std::string>() != kind)
        fail(Err::InvalidInput, std::string("expected a document of kind ") + kind);
}

void expect_ordering(const json& j, const std::array<const char*, 4>& labels) {
    const json& o = field(j, "ordering");
    if (!o.is_array() || o.size() != 4) fail(Err::InvalidInput, "ordering must list four labels");
    for (int i = 0; i < 4; ++i)
        if (o[i].get<std::string>() != labels[i]) fail(Err::InvalidInput, "ordering differs from the canonical one");
}
}  // namespace

json config_json(const RunConfig& c) {
    return {{"p", c.p},           {"kf", c.kf},         {"kg", c.kg},        {"apf", zstr(c.apf)},
            {"apg", zstr(c.apg)}, {"epsf", zstr(c.epsf)}, {"epsg", zstr(c.epsg)}, {"u", zstr(c.u)},
            {"levels", c.levels}, {"prec", c.prec},     {"guard", c.guard},  {"seed", c.seed}};
}

json val_json(long v) { return v >= INF ? json("inf") : json(v); }

long val_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return INF;
    if (!j.is_number_integer()) fail(Err::InvalidInput, "valuation must be an integer or \"inf\"");
    return j.get<long>();
}

// value = p^exponent * sum coords[k] b_k, coords reduced modulo p^(abs_precision - exponent)
json scalar_json(const Scalar& a) {
    Scalar s = a;
    s.normalize();
    s.reduce();
    json coords = json::array();
    bool z = s.is_zero();
    for (const auto& x : s.c) coords.push_back(z ? std::string("0") : zstr(x));
    return {{"field_id", a.F->id}, {"coords", coords}, {"exponent", z ? 0 : s.ex}, {"abs_precision", val_json(s.pr)}};
}

Scalar scalar_from_json(const json& j, const Field* F) {
    if (field(j, "field_id").get<std::string>() != F->id) fail(Err::InvalidInput, "scalar belongs to another field");
    const json& coords = field(j, "coords");
    if (!coords.is_array() || (int)coords.size() != F->d) fail(Err::InvalidInput, "scalar has the wrong number of coords");
    long pr = val_from_json(field(j, "abs_precision"));
    Scalar s(F, INF);
    s.pr = pr;
    s.ex = field(j, "exponent").get<long>();
    for (int k = 0; k < F->d; ++k) s.c[k] = zparse(coords[k]);
    s.reduce();
    return s;
}

json series_json(const Poly& a, long trunc) {
    json coeffs = json::array();
    for (long k = 0; k <= a.deg(); ++k) coeffs.push_back(scalar_json(a.coef(k)));
    return {{"trunc_order", trunc < 0 ? json("inf") : json(trunc)}, {"coeffs", coeffs}};
}

json lambda_json(const LambdaElement& a) {
    json out = json::array();
    json spec = modulus_json(a.mod);
    for (size_t t = 0; t < a.comp.size(); ++t) {
        Poly x = z_to_x(a.comp[t]);
        json coeffs = json::array();
        for (long k = 0; k <= x.deg(); ++k) coeffs.push_back(scalar_json(x.coef(k)));
        out.push_back({{"u", zstr(a.R.u)},
                       {"delta_component", t},
                       {"modulus_spec", spec},
                       {"field_id", a.R.F->id},
                       {"coeffs", coeffs}});
    }
    return out;
}

LambdaElement lambda_from_json(const json& j, const LambdaRing& R, const LambdaRing& RE) {
    if (!j.is_array() || j.empty()) fail(Err::InvalidInput, "Lambda element must be a list of Delta components");
    const LambdaRing& S = ring_for(field(j[0], "field_id").get<std::string>(), R, RE);
    Modulus M = modulus_from_json(field(j[0], "modulus_spec"));
    LambdaElement a = LambdaElement::zero(S, M);
    if (j.size() != a.comp.size()) fail(Err::InvalidInput, "wrong number of Delta components");
    for (size_t t = 0; t < j.size(); ++t) {
        const json& c = j[t];
        if (zparse(field(c, "u")) != S.u) fail(Err::InvalidInput, "element was built with another generator u");
        if (field(c, "delta_component").get<size_t>() != t) fail(Err::InvalidInput, "Delta components out of order");
        if (!(modulus_from_json(field(c, "modulus_spec")) == M)) fail(Err::LevelMismatch, "components disagree on the modulus");
        std::vector<Scalar> xs;
        for (const auto& s : field(c, "coeffs")) xs.push_back(scalar_from_json(s, S.F));
        Poly x = xs.empty() ? Poly(S.F, 0) : Poly::from_scalars(S.F, xs);
        a.comp[t] = x_to_z(x);
    }
    a.reduce();
    return a;
}

json dist_json(const DistApproximant& d) {
    json lv = json::array();
    for (const auto& l : d.levels) lv.push_back(lambda_json(l));
    return {{"m", d.m}, {"growth_order", qstr(d.growth_order)}, {"c", qstr(d.c)}, {"levels", lv}};
}

DistApproximant dist_from_json(const json& j, const LambdaRing& R, const LambdaRing& RE) {
    DistApproximant d;
    d.m = field(j, "m").get<int>();
    if (d.growth_order.set_str(field(j, "growth_order").get<std::string>(), 10) != 0 ||
        d.c.set_str(field(j, "c").get<std::string>(), 10) != 0)
        fail(Err::InvalidInput, "growth data must be rational strings");
    d.growth_order.canonicalize();
    d.c.canonicalize();
    for (const auto& l : field(j, "levels")) d.levels.push_back(lambda_from_json(l, R, RE));
    return d;
}

json field_json(const FieldDescriptor& E) {
    json poly = json::array();
    for (const auto& c : E.defining_poly) poly.push_back(zstr(c));
    return {{"field_id", E.F->id}, {"p", E.p}, {"ramification", E.e}, {"residue_degree", E.f}, {"defining_poly", poly}};
}

json check_json(const CheckRecord& c) {
    return {{"name", c.name},
            {"statement", c.statement},
            {"level", c.level},
            {"residual_valuation", val_json(c.residual_val)},
            {"pass", c.pass},
            {"detail", c.detail}};
}

json bundle_json(const LogMatrixBundle& B, const RunConfig& c) {
    const FormPair& pr = B.pair;
    json out;
    out["schema_version"] = kSchemaVersion;
    out["kind"] = "log_matrix_bundle";
    out["config"] = config_json(c);
    out["form_pair"] = {{"p", pr.p},
                        {"kf", pr.kf},
                        {"kg", pr.kg},
                        {"apf", zstr(pr.apf)},
                        {"apg", zstr(pr.apg)},
                        {"epsf", zstr(pr.epsf)},
                        {"epsg", zstr(pr.epsg)},
                        {"field", field_json(pr.E)},
                        {"alpha_f", scalar_json(pr.alpha_f)},
                        {"beta_f", scalar_json(pr.beta_f)},
                        {"alpha_g", scalar_json(pr.alpha_g)},
                        {"beta_g", scalar_json(pr.beta_g)}};
    out["u"] = zstr(B.R.u);
    out["m"] = B.m();
    out["n_max"] = B.n_max;
    out["matrices"] = {{"A_f", smat_json(B.Af)}, {"A_g", smat_json(B.Ag)}, {"A0", smat_json(B.A0)},
                       {"A", smat_json(B.A)},    {"Q", smat_json(B.Q)},   {"Q_inv", smat_json(B.Qinv)},
                       {"D", smat_json(B.D)},    {"c_Q", B.cQ}};
    out["wach"] = {{"P", pmat_json(B.P_pi, B.P_N)},
                   {"P_inv", pmat_json(B.Pinv_pi, -1)},
                   {"P_wach_inv", pmat_json(B.Pw_inv_pi, -1)},
                   {"normalizer", series_json(B.r_pi, -1)}};
    json levels = json::array();
    json prec_levels = json::array();
    for (int n = 0; n <= B.n_max; ++n) {
        levels.push_back({{"n", n}, {"H", lmat_json(B.H[n])}, {"M_log", lmat_json(B.Mlog[n])}});
        prec_levels.push_back({{"n", n},
                               {"modulus", modulus_json(Modulus::omega(n, B.m()))},
                               {"min_valuation_H", val_json(lmat_min_val(B.H[n]))},
                               {"min_valuation_M_log", val_json(lmat_min_val(B.Mlog[n]))}});
    }
    out["levels"] = levels;
    json checks = json::array();
    bool all = true;
    for (const auto& ch : B.ledger) {
        checks.push_back(check_json(ch));
        all = all && ch.pass;
    }
    out["ledger"] = {{"working_precision", B.prec},
                     {"guard_digits", B.guard},
                     {"pass_threshold", B.floor()},
                     {"levels", prec_levels},
                     {"all_pass", all},
                     {"checks", checks}};
    return out;
}

json analytic_json(const AnalyticQuadruple& F, const RunConfig& c) {
    json entries = json::array();
    for (const auto& d : F.F) entries.push_back(dist_json(d));
    json ord = json::array();
    for (auto l : kEigenLabels) ord.push_back(l);
    return {{"schema_version", kSchemaVersion}, {"kind", "analytic_quadruple"}, {"config", config_json(c)},
            {"ordering", ord}, {"levels", F.top_level()}, {"entries", entries}};
}

AnalyticQuadruple analytic_from_json(const json& j, const LogMatrixBundle& B) {
    expect_kind(j, "analytic_quadruple");
    expect_ordering(j, kEigenLabels);
    const json& e = field(j, "entries");
    if (!e.is_array() || e.size() != 4) fail(Err::InvalidInput, "a quadruple has four entries");
    AnalyticQuadruple F;
    for (int i = 0; i < 4; ++i) F.F[i] = dist_from_json(e[i], B.R, B.RE);
    const int n = field(j, "levels").get<int>();
    for (int i = 0; i < 4; ++i) {
        const auto& lv = F.F[i].levels;
        if ((int)lv.size() != n + 1) fail(Err::LevelMismatch, "entry levels disagree with the declared level");
        if (n > B.n_max) fail(Err::LevelMismatch, "quadruple level exceeds the bundle");
        if (F.F[i].m != B.m()) fail(Err::LevelMismatch, "quadruple was built for another m");
        for (int k = 0; k <= n; ++k) {
            if (!(lv[k].mod == Modulus::omega(k, B.m()))) fail(Err::LevelMismatch, "level modulus is not omega_{n,m}");
            if (lv[k].R.F != B.RE.F) fail(Err::InvalidInput, "analytic entries must lie over the coefficient field E");
        }
    }
    return F;
}

json signed_json(const SignedQuadruple& x, const SplitCertificate* cert, const RunConfig& c) {
    json entries = json::array();
    for (const auto& e : x.F) entries.push_back(lambda_json(e));
    json ord = json::array();
    for (auto l : kSignedLabels) ord.push_back(l);
    json out = {{"schema_version", kSchemaVersion}, {"kind", "signed_quadruple"}, {"config", config_json(c)},
                {"ordering", ord}, {"levels", x.level()}, {"entries", entries}};
    if (cert) {
        json lv = json::array();
        for (long v : cert->level_residual_vals) lv.push_back(val_json(v));
        out["certificate"] = {{"pass", cert->pass},
                              {"vanishing_prerequisite", cert->prereq},
                              {"per_level_residual_valuations", lv},
                              {"integrality", cert->integral},
                              {"adjugate_division_remainder_valuation", val_json(cert->stage_a_remainder_val)},
                              {"stage_b_remainder_valuation", val_json(cert->stage_b_remainder_val)},
                              {"kernel_element_valuation", val_json(cert->kernel_element_val)},
                              {"kernel_image_valuation", val_json(cert->kernel_image_val)},
                              {"detail", cert->detail}};
    }
    return out;
}

SignedQuadruple signed_from_json(const json& j, const LogMatrixBundle& B) {
    expect_kind(j, "signed_quadruple");
    expect_ordering(j, kSignedLabels);
    const json& e = field(j, "entries");
    if (!e.is_array() || e.size() != 4) fail(Err::InvalidInput, "a quadruple has four entries");
    SignedQuadruple x;
    for (int i = 0; i < 4; ++i) x.F[i] = lambda_from_json(e[i], B.R, B.RE);
    for (int i = 1; i < 4; ++i)
        if (!(x.F[i].mod == x.F[0].mod)) fail(Err::LevelMismatch, "entries disagree on the modulus");
    return x;
}

json report_json(const std::vector<SuiteReport>& reps, const RunConfig& c) {
    json suites = json::array();
    bool all = !reps.empty();
    for (const auto& r : reps) {
        json checks = json::array();
        for (const auto& ch : r.checks) checks.push_back(check_json(ch));
        suites.push_back({{"suite", r.suite}, {"pass", r.pass}, {"error", r.error}, {"checks", checks}});
        all = all && r.pass;
    }
    return {{"schema_version", kSchemaVersion}, {"kind", "verification_report"}, {"config", config_json(c)},
            {"pass", all}, {"suites", suites}};
}

}  // namespace rs
