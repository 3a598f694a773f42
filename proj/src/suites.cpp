#include "rs/suites.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

namespace rs {

namespace {
long val_of(const LambdaElement& a) { return a.is_zero() ? INF : a.min_val(); }

// Worst case of one named check over many samples.
struct Tally {
    std::map<std::pair<std::string, int>, CheckRecord> rec;
    std::map<std::pair<std::string, int>, int> failures, total;

    void add(const std::string& name, const std::string& statement, int level, long residual, bool pass,
             const std::string& detail = "") {
        auto key = std::make_pair(name, level);
        auto it = rec.find(key);
        if (it == rec.end()) {
            rec[key] = CheckRecord{name, statement, level, residual, pass, detail};
        } else {
            CheckRecord& c = it->second;
            c.residual_val = std::min(c.residual_val, residual);
            if (!pass && c.pass) c.detail = detail;
            c.pass = c.pass && pass;
        }
        total[key]++;
        if (!pass) failures[key]++;
    }
    std::vector<CheckRecord> records() const {
        std::vector<CheckRecord> out;
        for (auto& [key, c] : rec) {
            CheckRecord r = c;
            if (total.at(key) > 1) {
                auto f = failures.count(key) ? failures.at(key) : 0;
                std::string s = std::to_string(total.at(key) - f) + "/" + std::to_string(total.at(key)) + " samples pass";
                r.detail = r.detail.empty() ? s : s + "; " + r.detail;
            }
            out.push_back(r);
        }
        return out;
    }
};

LambdaElement unit_bump(const LambdaElement& a) {
    return a + LambdaElement::constant(a.R, a.mod, Scalar::one(a.R.F));
}

// ---------------------------------------------------------------- suites

void suite_mellin(const LogMatrixBundle& B, const SuiteOptions& opt, Tally& T) {
    const int m = B.m();
    const long fl = B.floor();
    std::mt19937_64 rng(opt.seed);
    for (int n = 0; n <= std::min(B.n_max, 2); ++n) {
        for (int s = 0; s < opt.mellin_samples; ++s) {
            LambdaElement a = random_lambda(B.R, n, m, rng);
            Poly y = mellin_forward(a, n, m);
            if (opt.perturb && s == 0) y = y + Poly::monomial(B.R.F, 1, Scalar::one(B.R.F));
            LambdaElement back = mellin_inverse(B.R, y, n, m);
            long v = val_of(back - a);
            T.add("mellin_round_trip", "inverse Mellin transform undoes the Mellin transform", n, v, v >= fl);
        }
    }
    const std::pair<int, int> nm[3] = {{1, 1}, {1, 2}, {2, 2}};
    for (auto [n, mm] : nm) {
        if (n > B.n_max) continue;
        MellinReport r = mellin_divisibility_check(B.R, n, mm, opt.divisibility_samples, opt.seed + 1000 * n + mm, opt.perturb);
        T.add("mellin_divisibility_m" + std::to_string(mm),
              "Mellin image divisible by phi^(n+1)(pi)^m exactly when the element lies in the ideal", n,
              r.pass ? INF : 0, r.pass, r.witness);
    }
}

void suite_congruences(const LogMatrixBundle& B0, const SuiteOptions& opt, Tally& T) {
    const LogMatrixBundle* B = &B0;
    LogMatrixBundle copy;
    std::vector<CheckRecord> checks = B0.ledger;
    if (opt.perturb) {
        copy = B0;
        const Field* F = copy.R.F;
        copy.Mtrunc[1][0][0] = copy.Mtrunc[1][0][0] + Poly::monomial(F, 1, Scalar::one(F));
        copy.Pinv_pi[1][0] = copy.Pinv_pi[1][0] + Poly::monomial(F, 0, Scalar::one(F));
        B = &copy;
        checks.clear();
        checks.push_back(B0.ledger.front());
        auto a = p_inverse_checks(*B);
        auto b = congruence_checks(*B);
        checks.insert(checks.end(), a.begin(), a.end());
        checks.insert(checks.end(), b.begin(), b.end());
    }
    for (const auto& c : checks) T.add(c.name, c.statement, c.level, c.residual_val, c.pass, c.detail);
}

void suite_adj(const LogMatrixBundle& B0, const SuiteOptions& opt, Tally& T) {
    const LogMatrixBundle* B = &B0;
    LogMatrixBundle copy;
    if (opt.perturb) {
        copy = B0;
        for (int n = 0; n <= copy.n_max; ++n) {
            copy.Mlog[n][0][0] = unit_bump(copy.Mlog[n][0][0]);
            const Field* F = copy.R.F;
            copy.Hy[n][0][0] = copy.Hy[n][0][0] + Poly::monomial(F, 1, Scalar::one(F));
        }
        B = &copy;
    }
    for (int n = 1; n <= B->n_max; ++n) {
        DetReport d = det_structure_check(*B, n);
        T.add("det_vanishes_on_twisted_cyclotomic_points", "det M_log vanishes at u^i zeta - 1, zeta != 1", n,
              d.vanishes ? INF : 0, d.vanishes, d.detail);
        T.add("det_nonzero_at_level_zero", "det M_log is nonzero at u^j - 1", n, d.nonzero_level0 ? INF : 0,
              d.nonzero_level0, d.detail);
        std::string mult;
        bool ok = true;
        for (const auto& r : d.rows) {
            mult += "(k=" + std::to_string(r.k) + ",i=" + std::to_string(r.i) + "):" + std::to_string(r.found) + "/" +
                    std::to_string(r.expected) + " ";
            ok = ok && r.found == r.expected;
        }
        T.add("det_multiplicities", "zero multiplicities of det M_log follow min/max of the weights", n,
              ok ? INF : 0, ok, mult);
        AdjReport a = adj_divisibility_check(*B, n);
        T.add("adj_divisible_level_representative", "adj(M_log) vanishes on the zeros of N_{n,max(kf,kg)+1}", n,
              a.literal ? INF : 0, a.literal, a.detail);
        T.add("adj_divisible_exact_lift", "adjugate of the exact lift divisible with multiplicity", n,
              a.fattened ? INF : 0, a.fattened, a.detail);
    }
}

void suite_growth(const LogMatrixBundle& B0, const SuiteOptions& opt, Tally& T) {
    const LogMatrixBundle* B = &B0;
    LogMatrixBundle copy;
    if (opt.perturb) {
        copy = B0;
        for (int n = 0; n <= copy.n_max; ++n) {
            LambdaElement& h = copy.H[n][0][0];
            h = h + LambdaElement::constant(h.R, h.mod, Scalar::rational(h.R.F, mpq_class(1, copy.pair.p), copy.R.prec));
        }
        B = &copy;
    }
    for (int n = 0; n <= B->n_max; ++n) {
        GrowthReport g = growth_check(*B, n);
        for (const auto& r : g.rows) {
            std::string d = "row " + std::string(kEigenLabels[r.index]) + ": min valuation " + r.min_val.get_str() +
                            ", bound " + r.bound.get_str();
            T.add(std::string("growth_bound_") + kEigenLabels[r.index], "rows of Q^-1 M_log have valuation >= -(n+1) v(lambda mu) - c_Q", n,
                  r.min_val >= INF ? INF : (long)floor(r.min_val.get_d()), r.pass, d);
        }
        T.add("H_integral", "H_n is integral", n, g.H_integral ? INF : -1, g.H_integral);
    }
}

void suite_split(const LogMatrixBundle& B, const SuiteOptions& opt, Tally& T) {
    const int n = B.n_max;
    const int m = B.m();
    const long fl = B.floor();
    const int h = std::max(B.pair.kf, B.pair.kg);
    for (int s = 0; s < opt.split_samples; ++s) {
        SignedQuadruple x = random_signed(B, n, opt.seed * 7919 + s);
        AnalyticQuadruple F = coleman_decompose(x, B);
        if (opt.perturb && s == 0) F.F[3].levels[n] = unit_bump(F.F[3].levels[n]);
        VanishingCertificate vc = vanishing_certificate(F, B, 0, m - 1);
        T.add("split_vanishing_conditions", "forward models satisfy the vanishing conditions for 0 <= j < m", n,
              vc.pass ? INF : 0, vc.pass, vc.first_failure());
        if (!vc.pass) continue;
        SplitResult r = signed_split(F, B);
        long err = INF;
        for (int i = 0; i < 4; ++i) err = std::min(err, val_of(r.x.F[i] - embed(B.RE, x.F[i]).reduced(Modulus::omega(0, m))));
        T.add("split_level0_recovery", "signed split recovers x modulo omega_{0,m}", 0, err, err >= fl);
        for (int k = 1; k <= n; ++k) {
            long v = r.cert.level_residual_vals[k];
            std::string d;
            if (r.cert.kernel_element_val < INF && r.cert.kernel_image_val >= fl)
                d = "Q^-1 M_log has a nonzero kernel element modulo omega_{" + std::to_string(n) + "," + std::to_string(m) +
                    "}";
            T.add("split_round_trip", "signed split recovers x modulo omega_{n,m}", k, v, v >= fl, d);
        }
        T.add("split_stage_b_divisibility", "stage A output divisible by N_{n,m}", n, r.cert.stage_b_remainder_val,
              r.cert.stage_b_remainder_val >= fl);
        T.add("split_adjugate_lift_division", "lifted adjugate divisible by its forced cyclotomic factor", n,
              r.cert.stage_a_remainder_val, r.cert.stage_a_remainder_val >= fl);
    }
    for (int s = 0; s < opt.partial_samples; ++s) {
        SignedQuadruple x = random_signed(B, n, opt.seed * 104729 + s);
        AnalyticQuadruple F = restricted_range_model(x, B, opt.seed + s);
        if (opt.perturb && s == 0) F.F[0].levels[n] = unit_bump(F.F[0].levels[n]);
        VanishingCertificate vc = vanishing_certificate(F, B, 0, h);
        T.add("partial_vanishing_conditions", "restricted models satisfy the vanishing conditions for j <= h", n,
              vc.pass ? INF : 0, vc.pass, vc.first_failure());
        if (!vc.pass) continue;
        SplitResult r = partial_split(F, B);
        Poly ratio = partial_ratio_z(B, B.RE, n);
        long err = INF;
        for (int i = 0; i < 4; ++i) {
            LambdaElement want = embed(B.RE, x.F[i]).reduced(Modulus::omega(0, m)) *
                                 LambdaElement::from_gamma_poly(B.RE, Modulus::omega(0, m), ratio);
            err = std::min(err, val_of(r.x.F[i] - want));
        }
        T.add("partial_level0_recovery", "partial split recovers (N_m/N_{h+1}) x modulo omega_{0,m}", 0, err, err >= fl);
        for (int k = 1; k <= n; ++k) {
            long v = r.cert.level_residual_vals[k];
            T.add("partial_round_trip", "partial split recovers (N_m/N_{h+1}) x modulo omega_{n,m}", k, v, v >= fl);
        }
        T.add("partial_stage_b_divisibility", "stage A output divisible by N_{n,h+1}", n, r.cert.stage_b_remainder_val,
              r.cert.stage_b_remainder_val >= fl);
        T.add("partial_adjugate_lift_division", "lifted adjugate divisible by its forced cyclotomic factor", n,
              r.cert.stage_a_remainder_val, r.cert.stage_a_remainder_val >= fl);
    }
}

void suite_antisym(const LogMatrixBundle& B, const SuiteOptions& opt, Tally& T) {
    for (int s = 0; s < opt.antisym_samples; ++s) {
        std::vector<LMat> M = random_antisymmetric(B, opt.seed * 31 + s);
        if (opt.perturb && s == 0) M.back()[0][1] = unit_bump(M.back()[0][1]);
        AntisymResult r;
        try {
            r = antisym_transport(M, B);
        } catch (const Error& e) {
            T.add("antisym_input", "M_sign is antisymmetric with zero diagonal", B.n_max, 0, false, e.what());
            continue;
        }
        T.add("antisym_output", "Q^-1 M_log M_sign (Q^-1 M_log)^T is antisymmetric with zero diagonal", B.n_max,
              r.antisym_residual, r.antisym_residual >= B.floor());
        T.add("antisym_minor_expansion", "transport agrees with the expansion over 2x2 minors", B.n_max,
              r.oracle_residual, r.oracle_residual >= B.floor());
    }
}

void suite_images(const LogMatrixBundle& B0, const SuiteOptions& opt, Tally& T) {
    const LogMatrixBundle* B = &B0;
    LogMatrixBundle copy;
    if (opt.perturb) {
        copy = B0;
        copy.A[3][0] = copy.A[3][0] + Scalar::one(copy.R.F);
        B = &copy;
    }
    ImageTable tab;
    try {
        tab = image_dimensions(*B);
    } catch (const Error& e) {
        T.add("images_phi_shift_invertible", "phi - p^(-j-1) is invertible for every j", 0, 0, false, e.what());
        return;
    }
    T.add("images_phi_shift_invertible", "phi - p^(-j-1) is invertible for every j", 0, INF, true);
    bool agree = true, bound = true;
    std::string bad;
    for (const auto& e : tab.rows) {
        if (e.n != e.n_oracle && agree) {
            agree = false;
            bad = pair_label(e.S) + " eta=omega^" + std::to_string(e.eta) + " j=" + std::to_string(e.j) + ": " +
                  std::to_string(e.n) + " vs " + std::to_string(e.n_oracle);
        }
        bound = bound && e.n >= 0 && e.n <= std::min(2, e.fil_dim);
    }
    T.add("images_rank_oracle", "intersection dimensions agree with exact rational row reduction", 0, agree ? INF : 0,
          agree, bad);
    T.add("images_intersection_bound", "n <= min(2, dim Fil^(-j))", 0, bound ? INF : 0, bound,
          std::to_string(tab.rows.size()) + " entries");
}
}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> v = {"mellin", "congruences", "adj", "growth", "split-roundtrip", "antisym",
                                               "images"};
    return v;
}

SuiteReport run_suite(const std::string& name, const LogMatrixBundle& B, const SuiteOptions& opt) {
    static const std::map<std::string, std::function<void(const LogMatrixBundle&, const SuiteOptions&, Tally&)>> table = {
        {"mellin", suite_mellin},   {"congruences", suite_congruences}, {"adj", suite_adj},
        {"growth", suite_growth},   {"split-roundtrip", suite_split},   {"antisym", suite_antisym},
        {"images", suite_images}};
    auto it = table.find(name);
    if (it == table.end()) fail(Err::InvalidInput, "unknown suite " + name);
    SuiteReport rep;
    rep.suite = name;
    Tally T;
    try {
        it->second(B, opt, T);
    } catch (const Error& e) {
        if (err_class(e.kind()) == ErrorClass::Precision) throw;
        rep.error = e.what();
    }
    rep.checks = T.records();
    std::sort(rep.checks.begin(), rep.checks.end(), [](const CheckRecord& a, const CheckRecord& b) {
        return std::tie(a.name, a.level) < std::tie(b.name, b.level);
    });
    rep.pass = rep.error.empty() && !rep.checks.empty();
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

}  // namespace rs
