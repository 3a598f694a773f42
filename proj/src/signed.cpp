#include "rs/signed.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace rs {

const std::array<const char*, 4> kEigenLabels = {"aa", "ab", "ba", "bb"};
const std::array<const char*, 4> kSignedLabels = {"##", "#♭", "♭#", "♭♭"};

bool SignedQuadruple::integral() const {
    for (const auto& x : F)
        if (!x.integral()) return false;
    return true;
}

namespace {
long val_of(const LambdaElement& a) { return a.is_zero() ? INF : a.min_val(); }
long val_of(const Poly& a) { return a.is_zero() ? INF : a.min_val_floor(); }

std::array<Scalar, 4> eigenvalue_products(const FormPair& pr) {
    return {pr.alpha_f * pr.alpha_g, pr.alpha_f * pr.beta_g, pr.beta_f * pr.alpha_g, pr.beta_f * pr.beta_g};
}

LMat column(const std::array<LambdaElement, 4>& x) {
    LMat c(4, std::vector<LambdaElement>(1));
    for (int i = 0; i < 4; ++i) c[i][0] = x[i];
    return c;
}

LMat lmat_right(const LMat& a, const SMat& s) {
    LMat r(a.size(), std::vector<LambdaElement>(s[0].size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < s[0].size(); ++j) {
            LambdaElement acc = LambdaElement::zero(a[0][0].R, a[0][0].mod);
            for (size_t k = 0; k < s.size(); ++k)
                if (!s[k][j].is_exact_zero()) acc = acc + a[i][k] * s[k][j];
            r[i][j] = acc;
        }
    return r;
}

LambdaElement as_level(const LambdaElement& a, int n, int m) {
    Modulus M = Modulus::omega(n, m);
    return a.mod == M ? a : a.reduced(M);
}

// Q^-1 M_log[n] applied to a column, over E.
std::array<LambdaElement, 4> forward(const LogMatrixBundle& B, int n, const std::array<LambdaElement, 4>& x,
                                     Direction dir) {
    LMat col = column(x);
    LMat y;
    if (x[0].R.F == B.R.F)
        y = lmat_embed(B.RE, lmat_mul(B.Mlog[n], col));
    else
        y = lmat_mul(lmat_embed(B.RE, B.Mlog[n]), col);
    if (dir == Direction::Eigen) y = lmat_left(B.Qinv, y);
    return {y[0][0], y[1][0], y[2][0], y[3][0]};
}

// Interpolate values at Z = u^i, i < m, into an element modulo omega_{0,m}.
LambdaElement interpolate_level0(const LambdaRing& R, int m, const std::vector<std::vector<Scalar>>& vals) {
    LambdaElement out = LambdaElement::zero(R, Modulus::omega(0, m));
    const Field* F = R.F;
    std::vector<Scalar> pts;
    for (int i = 0; i < m; ++i) pts.push_back(R.u_pow(i));
    for (size_t t = 0; t < out.comp.size(); ++t) {
        Poly acc(F, 0);
        for (int i = 0; i < m; ++i) {
            Poly basis = Poly::from_scalars(F, {Scalar::one(F)});
            Scalar den = Scalar::one(F);
            for (int l = 0; l < m; ++l) {
                if (l == i) continue;
                basis = basis * Poly::from_scalars(F, {-pts[l], Scalar::one(F)});
                den = den * (pts[i] - pts[l]);
            }
            acc = acc + basis * (vals[t][i] / den);
        }
        acc.trim();
        out.comp[t] = acc;
    }
    return out;
}

Poly poly_power(const Poly& a, int e) {
    Poly r = Poly::from_scalars(a.F, {Scalar::one(a.F)});
    for (int i = 0; i < e; ++i) r = r * a;
    return r;
}

// Per twist l < m: the adjugate of the exact lift of M_log on the piece
// (Tw^-l omega_n)^e, divided by prod_k (Tw^-l Phi_k)^(e-1) where e is the
// multiplicity of those factors in det M_log, then reduced mod Tw^-l omega_n.
// H_l Q^-1 M_log = det(Q^-1) det(M_log) / g_l^(e-1) there.
struct Stage {
    long lift_remainder_val = INF;   // exactness of the division of the adjugate
    long remainder_val = INF;        // stage B: y rem d_l
    std::vector<std::array<std::vector<Scalar>, 4>> vals;   // vals[l][r][t] = x_r(u^l) on component t
};

Stage run_stages(const AnalyticQuadruple& F, const LogMatrixBundle& B, long divide_upto) {
    const int n = F.top_level();
    const int m = B.m();
    const long a = B.pair.kf + 1, b = B.pair.kg + 1;
    const size_t ncomp = F.at(0, n).comp.size();
    Stage s;
    Scalar dq = det(B.Qinv);
    SMat adjQ = B.Q;
    for (auto& row : adjQ)
        for (auto& x : row) x = x * dq;
    Poly dM = lmat_det(B.Mlog[n]).comp[0];
    for (long l = 0; l < m; ++l) {
        const int e = n == 0 ? 1 : 1 + (l < a) + (l < b);
        Poly w = tw_omega_z(B.R, n, l);
        PMat ad = pmat_adj_mod(mlog_lift_piece(B, n, l, e), poly_power(w, e));
        Poly g = Poly::from_scalars(B.R.F, {Scalar::one(B.R.F)});
        for (int k = 1; k <= n; ++k) g = g * tw_phi_z(B.R, k, l);
        Poly ge = poly_power(g, e - 1);
        PMat H(4, std::vector<Poly>(4));
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                long rv = INF;
                Poly q = quo_exact(ad[r][c], ge, &rv);
                s.lift_remainder_val = std::min(s.lift_remainder_val, rv);
                H[r][c] = embed_poly(B.RE.F, rem(q, w));
            }
        Poly wE = tw_omega_z(B.RE, n, l);
        Poly d = l < divide_upto ? embed_poly(B.RE.F, g) : Poly::from_scalars(B.RE.F, {Scalar::one(B.RE.F)});
        Scalar z = B.RE.u_pow(l);
        Scalar dv = embed_prime(B.RE.F, eval(dM, B.R.u_pow(l)));
        if (dv.is_zero()) fail(Err::DivisionRemainder, "det(Q^-1 M_log) vanishes at u^" + std::to_string(l) + " - 1");
        Scalar scale = eval(d, z) * embed_prime(B.RE.F, eval(ge, B.R.u_pow(l))) / (dv * dq);
        // Hhat = H adj(Q^-1)
        PMat Hhat(4, std::vector<Poly>(4, Poly(B.RE.F, 0)));
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                for (int k = 0; k < 4; ++k)
                    if (!adjQ[k][c].is_exact_zero()) Hhat[r][c] = Hhat[r][c] + H[r][k] * adjQ[k][c];
        std::array<std::vector<Scalar>, 4> vl;
        for (size_t t = 0; t < ncomp; ++t) {
            std::array<Poly, 4> f;
            for (int c = 0; c < 4; ++c) f[c] = rem(F.at(c, n).comp[t], wE);
            for (int r = 0; r < 4; ++r) {
                Poly y(B.RE.F, 0);
                for (int c = 0; c < 4; ++c) y = y + Hhat[r][c] * f[c];
                y = rem(y, wE);
                Poly q, rr;
                divrem(y, d, &q, &rr);
                s.remainder_val = std::min(s.remainder_val, val_of(rr));
                vl[r].push_back(eval(q, z) * scale);
            }
        }
        s.vals.push_back(vl);
    }
    return s;
}

SignedQuadruple level0_solution(const LogMatrixBundle& B, const Stage& s, const std::vector<Scalar>& extra) {
    const int m = B.m();
    SignedQuadruple x;
    for (int r = 0; r < 4; ++r) {
        std::vector<std::vector<Scalar>> vals(s.vals[0][r].size());
        for (size_t t = 0; t < vals.size(); ++t)
            for (int i = 0; i < m; ++i) {
                Scalar v = s.vals[i][r][t];
                if (!extra.empty()) v = v * extra[i];
                vals[t].push_back(v);
            }
        x.F[r] = interpolate_level0(B.RE, m, vals);
    }
    return x;
}

// k = (omega_{n,m} / Tw^-(m-1) Phi_n) adj(M_log) e_c for the column with the largest k.
void kernel_exhibit(const LogMatrixBundle& B, int n, SplitCertificate* cert) {
    if (n < 1) return;
    const int m = B.m();
    Modulus M = Modulus::omega(n, m);
    Modulus rest = M;
    rest.mult.erase({n, m - 1});
    Poly g = modulus_z(B.R, rest);
    LMat adj = lmat_adj(B.Mlog[n]);
    long best = INF;
    std::array<LambdaElement, 4> kbest;
    for (int c = 0; c < 4; ++c) {
        std::array<LambdaElement, 4> k;
        long v = INF;
        for (int r = 0; r < 4; ++r) {
            k[r] = adj[r][c] * LambdaElement::from_gamma_poly(B.R, M, g);
            v = std::min(v, val_of(k[r]));
        }
        if (v < best || c == 0) best = v, kbest = k;
    }
    auto img = forward(B, n, kbest, Direction::Eigen);
    long iv = INF;
    for (auto& e : img) iv = std::min(iv, val_of(e));
    cert->kernel_element_val = best;
    cert->kernel_image_val = iv;
}

void level_residuals(const LogMatrixBundle& B, const SignedQuadruple& x, const std::vector<std::array<LambdaElement, 4>>& target,
                     SplitCertificate* cert) {
    const int m = B.m();
    for (size_t k = 0; k < target.size(); ++k) {
        std::array<LambdaElement, 4> lift;
        for (int r = 0; r < 4; ++r) {
            lift[r] = LambdaElement::zero(B.RE, Modulus::omega(k, m));
            lift[r].comp = x.F[r].comp;
            lift[r].reduce();
        }
        auto img = forward(B, k, lift, Direction::Eigen);
        long v = INF;
        for (int r = 0; r < 4; ++r) v = std::min(v, val_of(img[r] - target[k][r]));
        cert->level_residual_vals.push_back(v);
    }
}

void finish(const LogMatrixBundle& B, SplitResult* res) {
    SplitCertificate& c = res->cert;
    const long fl = B.floor();
    c.integral = res->x.integral();
    bool levels_ok = true;
    for (size_t k = 0; k < c.level_residual_vals.size(); ++k)
        if (c.level_residual_vals[k] < fl) {
            levels_ok = false;
            c.detail += "level " + std::to_string(k) + " residual valuation " + std::to_string(c.level_residual_vals[k]) + "; ";
        }
    if (c.stage_a_remainder_val < fl)
        c.detail += "adjugate lift division remainder valuation " + std::to_string(c.stage_a_remainder_val) + "; ";
    if (c.stage_b_remainder_val < fl)
        c.detail += "stage B remainder valuation " + std::to_string(c.stage_b_remainder_val) + "; ";
    if (c.kernel_element_val < INF && c.kernel_image_val >= fl)
        c.detail += "forward map has a nonzero kernel element at the top level (valuation " +
                    std::to_string(c.kernel_element_val) + "); ";
    c.pass = c.prereq && c.stage_a_remainder_val >= fl && c.stage_b_remainder_val >= fl && levels_ok;
}
}  // namespace

// ---------------------------------------------------------------- forward model

AnalyticQuadruple coleman_decompose(const SignedQuadruple& x, const LogMatrixBundle& B, Direction dir) {
    const int m = B.m();
    const int N = x.level();
    if (N > B.n_max) fail(Err::LevelMismatch, "quadruple level exceeds the bundle");
    for (const auto& e : x.F)
        if (!(e.mod == Modulus::omega(N, m))) fail(Err::LevelMismatch, "quadruple is not reduced modulo omega_{n,m}");
    AnalyticQuadruple out;
    auto lam = eigenvalue_products(B.pair);
    for (int i = 0; i < 4; ++i) {
        out.F[i].m = m;
        out.F[i].growth_order = dir == Direction::Eigen ? lam[i].val() : mpq_class(0);
        // level n of row i is bounded below by -((n+1) v(lambda mu) + c_Q)
        out.F[i].c = dir == Direction::Eigen ? lam[i].val() + B.cQ : mpq_class(0);
    }
    for (int n = 0; n <= N; ++n) {
        std::array<LambdaElement, 4> xs;
        for (int i = 0; i < 4; ++i) xs[i] = as_level(x.F[i], n, m);
        auto y = forward(B, n, xs, dir);
        for (int i = 0; i < 4; ++i) out.F[i].levels.push_back(y[i]);
    }
    return out;
}

LambdaElement random_lambda(const LambdaRing& R, int n, int m, std::mt19937_64& rng, long bound) {
    Modulus M = Modulus::omega(n, m);
    LambdaElement a = LambdaElement::zero(R, M);
    const long d = M.degree(R.p);
    std::uniform_int_distribution<long> dist(-bound, bound);
    for (auto& c : a.comp) {
        std::vector<mpz_class> v(d);
        for (auto& x : v) x = dist(rng);
        c = Poly::from_ints(R.F, v);
        c.trim();
    }
    return a;
}

SignedQuadruple random_signed(const LogMatrixBundle& B, int n, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    SignedQuadruple x;
    for (auto& e : x.F) e = random_lambda(B.R, n, B.m(), rng);
    return x;
}

// ---------------------------------------------------------------- vanishing

VanishingRow vanishing_check(const AnalyticQuadruple& F, const LogMatrixBundle& B, int j, int c, long i0) {
    const int top = F.top_level();
    const int k = c - 1;
    if (c < 2) fail(Err::InvalidInput, "the vanishing conditions concern characters of conductor p^c with c >= 2");
    if (k > top) fail(Err::ConductorExceedsLevel, "conductor p^" + std::to_string(c) + " exceeds the level");
    const LambdaElement& f0 = F.at(0, top);
    if (!f0.mod.mult.count({k, j})) fail(Err::LevelMismatch, "twist " + std::to_string(j) + " is outside the modulus");
    const LambdaRing& R = f0.R;
    const long q = R.p - 1;
    const size_t idx = (((j + i0) % q) + q) % q;
    Poly phi = tw_phi_z(R, k, j);
    auto lam = eigenvalue_products(B.pair);
    std::array<Poly, 4> w;
    for (int i = 0; i < 4; ++i) w[i] = rem(F.at(i, top).comp[idx], phi) * pow(lam[i], c);
    auto gens = filtration_generators(B.pair, j);
    VanishingRow row{j, c, i0, INF, true};
    for (int r = 0; r < 4; ++r) {
        if (std::find(gens.begin(), gens.end(), r) != gens.end()) continue;
        Poly v(R.F, 0);
        for (int i = 0; i < 4; ++i) v = v + w[i] * B.Q[r][i];
        row.residual_val = std::min(row.residual_val, val_of(v));
    }
    row.pass = row.residual_val >= B.floor();
    return row;
}

VanishingCertificate vanishing_certificate(const AnalyticQuadruple& F, const LogMatrixBundle& B, int j_lo, int j_hi) {
    VanishingCertificate cert;
    const int top = F.top_level();
    for (int j = j_lo; j <= j_hi; ++j)
        for (int c = 2; c <= top + 1; ++c)
            for (long i0 = 0; i0 < B.pair.p - 1; ++i0) {
                VanishingRow r = vanishing_check(F, B, j, c, i0);
                cert.pass = cert.pass && r.pass;
                cert.rows.push_back(r);
            }
    return cert;
}

std::string VanishingCertificate::first_failure() const {
    for (const auto& r : rows)
        if (!r.pass)
            return "vanishing fails at j=" + std::to_string(r.j) + ", theta of conductor p^" + std::to_string(r.c) +
                   " with Delta part omega^" + std::to_string(r.i0) + " (residual valuation " +
                   std::to_string(r.residual_val) + ")";
    return "";
}

// ---------------------------------------------------------------- splits

SplitResult signed_split(const AnalyticQuadruple& F, const LogMatrixBundle& B) {
    const int n = F.top_level();
    const int m = B.m();
    VanishingCertificate v = vanishing_certificate(F, B, 0, m - 1);
    if (!v.pass) fail(Err::VanishingPrereqFailed, v.first_failure());
    SplitResult res;
    Stage s = run_stages(F, B, m);
    res.cert.stage_a_remainder_val = s.lift_remainder_val;
    res.cert.stage_b_remainder_val = s.remainder_val;
    res.x = level0_solution(B, s, {});
    std::vector<std::array<LambdaElement, 4>> target;
    for (int k = 0; k <= n; ++k) target.push_back({F.at(0, k), F.at(1, k), F.at(2, k), F.at(3, k)});
    level_residuals(B, res.x, target, &res.cert);
    kernel_exhibit(B, n, &res.cert);
    finish(B, &res);
    return res;
}

Poly partial_ratio_z(const LogMatrixBundle& B, const LambdaRing& R, int n) {
    const int m = B.m();
    const long h1 = std::max(B.pair.kf, B.pair.kg) + 1;
    Modulus M;
    for (int k = 1; k <= n; ++k)
        for (long i = h1; i < m; ++i) M.mult[{k, i}] = 1;
    return modulus_z(R, M);
}

SplitResult partial_split(const AnalyticQuadruple& F, const LogMatrixBundle& B) {
    const int n = F.top_level();
    const int m = B.m();
    const long h = std::max(B.pair.kf, B.pair.kg);
    VanishingCertificate v = vanishing_certificate(F, B, 0, h);
    if (!v.pass) fail(Err::VanishingPrereqFailed, v.first_failure());
    SplitResult res;
    Stage s = run_stages(F, B, h + 1);
    res.cert.stage_a_remainder_val = s.lift_remainder_val;
    res.cert.stage_b_remainder_val = s.remainder_val;
    Poly ratio = partial_ratio_z(B, B.RE, n);
    std::vector<Scalar> extra;
    for (int i = 0; i < m; ++i) extra.push_back(eval(ratio, B.RE.u_pow(i)));
    res.x = level0_solution(B, s, extra);
    // target: ratio F at the top level and its reductions
    std::vector<std::array<LambdaElement, 4>> target(n + 1);
    LambdaElement r = LambdaElement::from_gamma_poly(B.RE, Modulus::omega(n, m), ratio);
    for (int i = 0; i < 4; ++i) {
        LambdaElement t = F.at(i, n) * r;
        for (int k = 0; k <= n; ++k) target[k][i] = as_level(t, k, m);
    }
    level_residuals(B, res.x, target, &res.cert);
    kernel_exhibit(B, n, &res.cert);
    finish(B, &res);
    return res;
}

AnalyticQuadruple restricted_range_model(const SignedQuadruple& x, const LogMatrixBundle& B, unsigned long long seed) {
    AnalyticQuadruple F = coleman_decompose(x, B, Direction::Eigen);
    const int n = F.top_level();
    const int m = B.m();
    const long h1 = std::max(B.pair.kf, B.pair.kg) + 1;
    // noise along v4, vanishing at level 0 and on every twist j <= h
    Poly g = modulus_z(B.RE, Modulus::omega(0, m) * Modulus::frak(n, h1));
    std::mt19937_64 rng(seed);
    LambdaElement r = random_lambda(B.R, n, m, rng, 5);
    r.comp[0] = r.comp[0] + Poly::from_ints(B.R.F, {1});
    LambdaElement noise = embed(B.RE, r) * LambdaElement::from_gamma_poly(B.RE, Modulus::omega(n, m), g);
    for (int i = 0; i < 4; ++i) {
        LambdaElement top = F.at(i, n) + noise * B.Qinv[i][3];
        for (int k = 0; k <= n; ++k) F.F[i].levels[k] = as_level(top, k, m);
    }
    return F;
}

// ---------------------------------------------------------------- antisymmetry

std::vector<LMat> random_antisymmetric(const LogMatrixBundle& B, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    const int n = B.n_max, m = B.m();
    LMat top(4, std::vector<LambdaElement>(4, LambdaElement::zero(B.R, Modulus::omega(n, m))));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            top[i][j] = random_lambda(B.R, n, m, rng);
            top[j][i] = LambdaElement::zero(B.R, top[i][j].mod) - top[i][j];
        }
    std::vector<LMat> out;
    for (int k = 0; k <= n; ++k) {
        LMat lv = top;
        for (auto& row : lv)
            for (auto& e : row) e = as_level(e, k, m);
        out.push_back(lv);
    }
    return out;
}

AntisymResult antisym_transport(const std::vector<LMat>& M_sign, const LogMatrixBundle& B) {
    AntisymResult res;
    for (size_t k = 0; k < M_sign.size(); ++k) {
        const LMat& M = M_sign[k];
        for (int i = 0; i < 4; ++i) {
            if (!M[i][i].is_zero()) fail(Err::NotAntisymmetric, "M_sign has a nonzero diagonal entry");
            for (int j = i + 1; j < 4; ++j)
                if (!(M[i][j] + M[j][i]).is_zero()) fail(Err::NotAntisymmetric, "M_sign is not antisymmetric");
        }
        const bool over_qp = M[0][0].R.F == B.R.F;
        LMat ML = over_qp ? B.Mlog[k] : lmat_embed(B.RE, B.Mlog[k]);
        LMat MLt = ML;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) MLt[i][j] = ML[j][i];
        LMat inner = lmat_mul(lmat_mul(ML, M), MLt);
        LMat innerE = over_qp ? lmat_embed(B.RE, inner) : inner;
        SMat Qt = B.Qinv;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) Qt[i][j] = B.Qinv[j][i];
        LMat out = lmat_right(lmat_left(B.Qinv, innerE), Qt);
        // oracle: out(i,j) = sum_{a<b} M(a,b) (X_ia X_jb - X_ib X_ja)
        LMat X = qinv_mlog(B, k);
        LMat ME = over_qp ? lmat_embed(B.RE, M) : M;
        for (int i = 0; i < 4; ++i) {
            res.antisym_residual = std::min(res.antisym_residual, val_of(out[i][i]));
            for (int j = i + 1; j < 4; ++j) {
                res.antisym_residual = std::min(res.antisym_residual, val_of(out[i][j] + out[j][i]));
                LambdaElement o = LambdaElement::zero(B.RE, out[i][j].mod);
                for (int a = 0; a < 4; ++a)
                    for (int b = a + 1; b < 4; ++b) {
                        if (ME[a][b].is_zero()) continue;
                        o = o + ME[a][b] * (X[i][a] * X[j][b] - X[i][b] * X[j][a]);
                    }
                res.oracle_residual = std::min(res.oracle_residual, val_of(out[i][j] - o));
            }
        }
        res.out.push_back(out);
    }
    res.pass = res.antisym_residual >= B.floor() && res.oracle_residual >= B.floor();
    return res;
}

// ---------------------------------------------------------------- images

const std::vector<std::array<int, 2>>& image_pairs() {
    static const std::vector<std::array<int, 2>> P = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    return P;
}

std::string pair_label(int S) {
    const auto& P = image_pairs()[S];
    return std::string(kSignedLabels[P[0]]) + "/" + kSignedLabels[P[1]];
}

int rank_over(const SMat& M0, long floor) {
    SMat M = M0;
    const int rows = M.size(), cols = rows ? M[0].size() : 0;
    int rank = 0;
    std::vector<bool> used(rows, false);
    for (int c = 0; c < cols; ++c) {
        int piv = -1;
        long best = INF;
        for (int r = 0; r < rows; ++r) {
            if (used[r]) continue;
            long v = M[r][c].is_zero() ? INF : M[r][c].val_floor();
            if (v < best) best = v, piv = r;
        }
        if (piv < 0 || best >= floor) continue;
        used[piv] = true;
        ++rank;
        Scalar ip = inv(M[piv][c]);
        for (int r = 0; r < rows; ++r) {
            if (r == piv || M[r][c].is_zero()) continue;
            Scalar f = M[r][c] * ip;
            for (int cc = c; cc < cols; ++cc) M[r][cc] = M[r][cc] - f * M[piv][cc];
        }
    }
    return rank;
}

namespace {
using QMat = std::vector<std::vector<mpq_class>>;

int rank_q(QMat M) {
    const int rows = M.size(), cols = rows ? M[0].size() : 0;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (M[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[piv], M[rank]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || M[r][c] == 0) continue;
            mpq_class f = M[r][c] / M[rank][c];
            for (int cc = c; cc < cols; ++cc) M[r][cc] -= f * M[rank][cc];
        }
        ++rank;
    }
    return rank;
}

QMat mul_q(const QMat& a, const QMat& b) {
    QMat r(a.size(), std::vector<mpq_class>(b[0].size(), 0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k)
            for (size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

QMat inverse_q(QMat a) {
    const int n = a.size();
    QMat b(n, std::vector<mpq_class>(n, 0));
    for (int i = 0; i < n; ++i) b[i][i] = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (a[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return {};
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        mpq_class ip = 1 / a[c][c];
        for (int k = 0; k < n; ++k) a[c][k] *= ip, b[c][k] *= ip;
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            mpq_class f = a[r][c];
            for (int k = 0; k < n; ++k) a[r][k] -= f * a[c][k], b[r][k] -= f * b[c][k];
        }
    }
    return b;
}

// The Frobenius matrix rebuilt from the integers of the pair, independently of the bundle.
QMat frobenius_q(const FormPair& pr) {
    auto h = [](const mpz_class& a, const mpz_class& e, long p, long k) {
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), p, k + 1);
        return QMat{{0, mpq_class(-e, pk)}, {1, mpq_class(a, pk)}};
    };
    QMat f = h(pr.apf, pr.epsf, pr.p, pr.kf), g = h(pr.apg, pr.epsg, pr.p, pr.kg);
    // coordinates (w_f w_g, phi w_f w_g, w_f phi w_g, phi w_f phi w_g)
    const int ia[4] = {0, 1, 0, 1}, ib[4] = {0, 0, 1, 1};
    QMat A(4, std::vector<mpq_class>(4));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) A[r][c] = f[ia[r]][ia[c]] * g[ib[r]][ib[c]];
    return A;
}

mpq_class ppow_q(long p, long e) {
    mpz_class a;
    mpz_ui_pow_ui(a.get_mpz_t(), p, std::labs(e));
    return e >= 0 ? mpq_class(a) : mpq_class(1, a);
}
}  // namespace

ImageTable image_dimensions(const LogMatrixBundle& B) {
    ImageTable T;
    const FormPair& pr = B.pair;
    const long p = pr.p;
    const int m = B.m();
    const Field* E = pr.E.F;
    const long fl = B.floor();
    SMat AE = embed_mat(E, B.A);
    QMat Aq = frobenius_q(pr);
    for (int j = 0; j <= m; ++j) {
        auto gens = filtration_generators(pr, j);
        const int fd = gens.size();
        // V_{omega^j, j}: (1 - p^j phi)(phi - p^(-j-1))^(-1) Fil^(-j)
        SMat shift = AE, left = smat_identity(E, 4);
        QMat shq = Aq, leftq(4, std::vector<mpq_class>(4, 0));
        for (int i = 0; i < 4; ++i) {
            shift[i][i] = shift[i][i] - shift_p(Scalar::one(E), -j - 1);
            shq[i][i] -= ppow_q(p, -j - 1);
            for (int c = 0; c < 4; ++c) {
                left[i][c] = left[i][c] - shift_p(AE[i][c], j);
                leftq[i][c] = (i == c ? 1 : 0) - ppow_q(p, j) * Aq[i][c];
            }
        }
        Scalar dsh = det(shift);
        if (dsh.is_zero() || dsh.val_floor() >= fl)
            fail(Err::SingularPhiShift, "phi has eigenvalue p^" + std::to_string(-j - 1) + " at j=" + std::to_string(j));
        SMat Tm = left * inverse(shift);
        QMat shinv = inverse_q(shq);
        if (shinv.empty()) fail(Err::SingularPhiShift, "phi - p^(-j-1) is singular");
        QMat Tq = mul_q(leftq, shinv);
        for (int t = 0; t < p - 1; ++t) {
            const bool twisted = (j % (p - 1)) == t;
            SMat V = smat_zero(E, 4, fd);
            QMat Vq(4, std::vector<mpq_class>(fd, 0));
            for (int g = 0; g < fd; ++g)
                for (int r = 0; r < 4; ++r) {
                    V[r][g] = twisted ? Tm[r][gens[g]] : Scalar::integer(E, r == gens[g] ? 1 : 0);
                    Vq[r][g] = twisted ? Tq[r][gens[g]] : mpq_class(r == gens[g] ? 1 : 0);
                }
            const int dv = rank_over(V, fl), dvq = rank_q(Vq);
            for (size_t S = 0; S < image_pairs().size(); ++S) {
                SMat C = smat_zero(E, 4, 2 + fd);
                QMat Cq(4, std::vector<mpq_class>(2 + fd, 0));
                for (int r = 0; r < 4; ++r) {
                    for (int s = 0; s < 2; ++s) {
                        C[r][s] = Scalar::integer(E, r == image_pairs()[S][s] ? 1 : 0);
                        Cq[r][s] = r == image_pairs()[S][s] ? 1 : 0;
                    }
                    for (int g = 0; g < fd; ++g) C[r][2 + g] = V[r][g], Cq[r][2 + g] = Vq[r][g];
                }
                ImageEntry e;
                e.S = S;
                e.eta = t;
                e.j = j;
                e.fil_dim = fd;
                e.n = 2 + dv - rank_over(C, fl);
                e.n_oracle = 2 + dvq - rank_q(Cq);
                T.pass = T.pass && e.n == e.n_oracle && e.n <= std::min(2, fd) && e.n >= 0;
                T.rows.push_back(e);
            }
        }
    }
    std::sort(T.rows.begin(), T.rows.end(), [](const ImageEntry& a, const ImageEntry& b) {
        return std::tie(a.S, a.eta, a.j) < std::tie(b.S, b.eta, b.j);
    });
    for (auto& e : T.rows) {
        int d = 0;
        for (auto& o : T.rows)
            if (o.S == e.S && o.eta == e.eta && o.j < m) d += o.n;
        e.ideal_degree = d;
    }
    return T;
}

std::string ImageTable::csv() const {
    std::ostringstream os;
    os << "S,eta,j,n,ideal_generator_degree\n";
    for (const auto& e : rows) os << pair_label(e.S) << ",omega^" << e.eta << "," << e.j << "," << e.n << "," << e.ideal_degree << "\n";
    return os.str();
}

}  // namespace rs
