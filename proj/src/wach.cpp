#include "rs/wach.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "rs/piseries.hpp"

namespace rs {

namespace {
mpz_class ipow(long p, long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, k);
    return r;
}

mpz_class binom(const mpz_class& n, long k) {
    mpz_class r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

Poly one_poly(const Field* F) { return Poly::from_scalars(F, {Scalar::one(F)}); }

Poly poly_pow(const Poly& a, long e) {
    Poly r = one_poly(a.F);
    for (long i = 0; i < e; ++i) r = r * a;
    r.trim();
    return r;
}

// monic (Y^s - 1)^e
Poly y_power_minus_one(const Field* F, long s, long e) {
    Poly b(F, s + 1);
    b.set(s, Scalar::one(F));
    b.set(0, Scalar::integer(F, -1));
    return poly_pow(b, e);
}

long residual_of(const Poly& a) {
    if (a.is_zero()) return a.exact() ? INF : std::max(a.pr, a.min_val_floor());
    return a.min_val_floor();
}

SMat smat_pow(const SMat& a, long e) {
    SMat r = smat_identity(a[0][0].F, a.size());
    for (long i = 0; i < e; ++i) r = r * a;
    return r;
}

SMat swap_middle(const SMat& a, bool rows, bool cols) {
    SMat r = a;
    const int perm[4] = {0, 2, 1, 3};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i][j] = a[rows ? perm[i] : i][cols ? perm[j] : j];
    return r;
}

SMat kron2(const SMat& a, const SMat& b) {
    SMat r = smat_zero(a[0][0].F, 4, 4);
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int j1 = 0; j1 < 2; ++j1)
                for (int j2 = 0; j2 < 2; ++j2) r[2 * i1 + i2][2 * j1 + j2] = a[i1][j1] * b[i2][j2];
    return r;
}

Scalar sc(const Field* F, const mpz_class& v) { return Scalar::integer(F, v); }

// polynomial modulo a fixed monic modulus, for generic determinant code
struct ModPoly {
    Poly v;
    const Poly* m;
};
ModPoly operator+(const ModPoly& a, const ModPoly& b) { return {a.v + b.v, a.m}; }
ModPoly operator-(const ModPoly& a, const ModPoly& b) { return {a.v - b.v, a.m}; }
ModPoly operator*(const ModPoly& a, const ModPoly& b) {
    Poly r = rem(a.v * b.v, *a.m);
    r.trim();
    return {r, a.m};
}

template <class T>
T det_rec(const std::vector<std::vector<T>>& a, std::vector<int> rows, std::vector<int> cols) {
    const int n = rows.size();
    if (n == 1) return a[rows[0]][cols[0]];
    if (n == 2) return a[rows[0]][cols[0]] * a[rows[1]][cols[1]] - a[rows[0]][cols[1]] * a[rows[1]][cols[0]];
    T s = a[rows[0]][cols[0]] - a[rows[0]][cols[0]];
    for (int j = 0; j < n; ++j) {
        std::vector<int> r2(rows.begin() + 1, rows.end()), c2;
        for (int k = 0; k < n; ++k)
            if (k != j) c2.push_back(cols[k]);
        T t = a[rows[0]][cols[j]] * det_rec(a, r2, c2);
        s = (j % 2 == 0) ? s + t : s - t;
    }
    return s;
}

template <class T>
T det_generic(const std::vector<std::vector<T>>& a) {
    std::vector<int> idx(a.size());
    for (size_t i = 0; i < a.size(); ++i) idx[i] = i;
    return det_rec(a, idx, idx);
}

template <class T>
std::vector<std::vector<T>> adj_generic(const std::vector<std::vector<T>>& a) {
    const int n = a.size();
    std::vector<std::vector<T>> r = a;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int> rows, cols;
            for (int k = 0; k < n; ++k) {
                if (k != j) rows.push_back(k);
                if (k != i) cols.push_back(k);
            }
            T m = det_rec(a, rows, cols);
            r[i][j] = ((i + j) % 2 == 0) ? m : (m - m) - m;
        }
    return r;
}

mpq_class scalar_val(const Scalar& s) { return s.val(); }
}  // namespace

// ---------------------------------------------------------------- pair

FormPair make_form_pair(long p, long kf, long kg, const mpz_class& apf, const mpz_class& apg, const mpz_class& epsf,
                        const mpz_class& epsg, long prec) {
    if (p == 2) fail(Err::EvenPrime, "p must be odd");
    if (!is_prime(p)) fail(Err::InvalidInput, "p must be prime");
    if (kf < 0 || kg < 0) fail(Err::InvalidInput, "weights must be non-negative");
    if (p <= kf + kg + 2) fail(Err::InvalidInput, "need p > k_f + k_g + 2");
    if (epsf == 0 || epsg == 0 || vp(epsf, p) != 0 || vp(epsg, p) != 0)
        fail(Err::NotAUnit, "eps(p) must be a p-adic unit");
    if ((apf != 0 && vp(apf, p) == 0) || (apg != 0 && vp(apg, p) == 0))
        fail(Err::OrdinaryForm, "a_p is a unit: the form is ordinary");
    FormPair pr;
    pr.p = p;
    pr.kf = kf;
    pr.kg = kg;
    pr.apf = apf;
    pr.apg = apg;
    pr.epsf = epsf;
    pr.epsg = epsg;
    pr.E = hecke_splitting_field(p, kf, apf, epsf, kg, apg, epsg, prec);
    const Field* E = pr.E.F;
    HeckeRoots f = hecke_roots(sc(E, apf), sc(E, epsf), kf, pr.E, prec);
    HeckeRoots g = hecke_roots(sc(E, apg), sc(E, epsg), kg, pr.E, prec);
    pr.alpha_f = f.alpha;
    pr.beta_f = f.beta;
    pr.alpha_g = g.alpha;
    pr.beta_g = g.beta;
    return pr;
}

// ---------------------------------------------------------------- matrices

PMat pmat_identity(const Field* F, int n) {
    PMat r(n, std::vector<Poly>(n, Poly(F, 0)));
    for (int i = 0; i < n; ++i) r[i][i] = one_poly(F);
    return r;
}

PMat pmat_mul(const PMat& a, const PMat& b) {
    const Field* F = a[0][0].F;
    PMat r(a.size(), std::vector<Poly>(b[0].size(), Poly(F, 0)));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b[0].size(); ++j) {
            Poly s(F, 0);
            for (size_t k = 0; k < b.size(); ++k) {
                if (a[i][k].is_zero() || b[k][j].is_zero()) continue;
                s = s + a[i][k] * b[k][j];
            }
            s.trim();
            r[i][j] = s;
        }
    return r;
}

PMat pmat_left(const SMat& a, const PMat& b) {
    const Field* F = b[0][0].F;
    PMat r(a.size(), std::vector<Poly>(b[0].size(), Poly(F, 0)));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b[0].size(); ++j) {
            Poly s(F, 0);
            for (size_t k = 0; k < b.size(); ++k) {
                if (a[i][k].is_exact_zero() || b[k][j].is_zero()) continue;
                s = s + b[k][j] * a[i][k];
            }
            s.trim();
            r[i][j] = s;
        }
    return r;
}

PMat pmat_phi(const PMat& a, long p) {
    PMat r = a;
    for (auto& row : r)
        for (auto& x : row) x = subst_pow(x, p);
    return r;
}

LMat lmat_mul(const LMat& a, const LMat& b) {
    LMat r(a.size(), std::vector<LambdaElement>(b[0].size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b[0].size(); ++j) {
            LambdaElement s = LambdaElement::zero(a[0][0].R, a[0][0].mod);
            for (size_t k = 0; k < b.size(); ++k) {
                if (a[i][k].is_zero() || b[k][j].is_zero()) continue;
                s = s + a[i][k] * b[k][j];
            }
            r[i][j] = s;
        }
    return r;
}

LMat lmat_left(const SMat& a, const LMat& b) {
    LMat r(a.size(), std::vector<LambdaElement>(b[0].size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b[0].size(); ++j) {
            LambdaElement s = LambdaElement::zero(b[0][0].R, b[0][0].mod);
            for (size_t k = 0; k < b.size(); ++k) {
                if (a[i][k].is_exact_zero()) continue;
                s = s + b[k][j] * a[i][k];
            }
            r[i][j] = s;
        }
    return r;
}

LambdaElement lmat_det(const LMat& a) { return det_generic(a); }
LMat lmat_adj(const LMat& a) { return adj_generic(a); }

Poly embed_poly(const Field* E, const Poly& a) {
    if (a.F == E) return a;
    if (a.F->d != 1) fail(Err::InvalidInput, "embedding expects a Q_p polynomial");
    Poly r(E, a.n, a.pr);
    r.ex = a.ex;
    for (long k = 0; k < a.n; ++k) r.c[k * E->d] = a.c[k];
    return r;
}

SMat embed_mat(const Field* E, const SMat& a) {
    SMat r = a;
    for (auto& row : r)
        for (auto& x : row) x = embed_prime(E, x);
    return r;
}

LambdaElement embed(const LambdaRing& RE, const LambdaElement& a) {
    LambdaElement r = a;
    r.R = RE;
    for (auto& x : r.comp) x = embed_poly(RE.F, x);
    return r;
}

LMat lmat_embed(const LambdaRing& RE, const LMat& a) {
    LMat r = a;
    for (auto& row : r)
        for (auto& x : row) x = embed(RE, x);
    return r;
}

// ---------------------------------------------------------------- Frobenius data

namespace {
SMat a0_h(const Field* F, const mpz_class& a, const mpz_class& eps) {
    SMat r = smat_zero(F, 2, 2);
    r[0][1] = -sc(F, eps);
    r[1][0] = Scalar::one(F);
    r[1][1] = sc(F, a);
    return r;
}
}  // namespace

SMat frobenius_A0(const FormPair& pr) {
    const Field* F = prime_field(pr.p);
    return swap_middle(kron2(a0_h(F, pr.apf, pr.epsf), a0_h(F, pr.apg, pr.epsg)), true, true);
}

SMat frobenius_A(const FormPair& pr) {
    const Field* F = prime_field(pr.p);
    SMat A0 = frobenius_A0(pr);
    const long sh[4] = {0, pr.kf + 1, pr.kg + 1, pr.m()};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) A0[i][j] = shift_p(A0[i][j], -sh[j]);
    (void)F;
    return A0;
}

void build_Q_D(const FormPair& pr, SMat* Q, SMat* D) {
    const Field* E = pr.E.F;
    const long prec = default_prec();
    auto qh = [&](const Scalar& al, const Scalar& be, const mpz_class& eps) {
        SMat q = smat_zero(E, 2, 2);
        Scalar ie = Scalar::rational(E, mpq_class(1, eps), prec);
        if (eps == 1 || eps == -1) ie = sc(E, eps);
        q[0][0] = al;
        q[0][1] = -be;
        q[1][0] = -(al * be * ie);
        q[1][1] = al * be * ie;
        return q;
    };
    *Q = swap_middle(kron2(qh(pr.alpha_f, pr.beta_f, pr.epsf), qh(pr.alpha_g, pr.beta_g, pr.epsg)), true, false);
    *D = smat_zero(E, 4, 4);
    Scalar ee = sc(E, pr.epsf * pr.epsg);
    const Scalar lf[2] = {pr.alpha_f, pr.beta_f}, lg[2] = {pr.alpha_g, pr.beta_g};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) (*D)[2 * a + b][2 * a + b] = ee / (lf[a] * lg[b]);
}

namespace {
std::vector<mpz_class> q_coeffs(long p) {
    std::vector<mpz_class> c(p);
    for (long i = 0; i < p; ++i) c[i] = binom(p, i + 1);
    return c;
}
std::vector<mpz_class> mu_inv_coeffs(long p) {
    std::vector<mpz_class> c(p - 1);
    for (long i = 0; i < p - 1; ++i) c[i] = binom(p, i + 1) / p;
    return c;
}
}  // namespace

PMat displayed_P_inverse_pi(const FormPair& pr, const Field* F) {
    const long p = pr.p;
    Poly q = Poly::from_ints(F, q_coeffs(p));
    Poly mi = Poly::from_ints(F, mu_inv_coeffs(p));
    // A0^-1 = S (A0_f^-1 (x) A0_g^-1) S with A0_h^-1 = [[a/eps, 1], [-1/eps, 0]]
    auto inv_h = [&](const mpz_class& a, const mpz_class& eps) {
        SMat r = smat_zero(F, 2, 2);
        Scalar ie = (eps == 1 || eps == -1) ? sc(F, eps) : Scalar::rational(F, mpq_class(1, eps), default_prec());
        r[0][0] = sc(F, a) * ie;
        r[0][1] = Scalar::one(F);
        r[1][0] = -ie;
        return r;
    };
    SMat A0i = swap_middle(kron2(inv_h(pr.apf, pr.epsf), inv_h(pr.apg, pr.epsg)), true, true);
    const long m = pr.m();
    Poly dg[4] = {poly_pow(mi, m), poly_pow(q, pr.kf + 1) * poly_pow(mi, pr.kg + 1),
                  poly_pow(q, pr.kg + 1) * poly_pow(mi, pr.kf + 1), poly_pow(q, m)};
    PMat r(4, std::vector<Poly>(4, Poly(F, 0)));
    for (int i = 0; i < 4; ++i) {
        dg[i].trim();
        for (int j = 0; j < 4; ++j)
            if (!A0i[i][j].is_exact_zero()) r[i][j] = dg[i] * A0i[i][j];
    }
    return r;
}

PMat displayed_P_pi(const FormPair& pr, const Field* F, long N) {
    const long p = pr.p;
    PiSeries mu = mu_series(F, N);
    PiSeries q = q_series(F, N);
    // 1/q = (1/p) (q/p)^-1, with q/p a unit series
    PiSeries qp = q * inv(Scalar::integer(F, p)).with_prec(default_prec());
    PiSeries qinv = inverse(qp) * inv(Scalar::integer(F, p)).with_prec(default_prec());
    auto pw = [&](const PiSeries& a, long e) {
        PiSeries r = PiSeries::constant(Scalar::one(F), N);
        for (long i = 0; i < e; ++i) r = r * a;
        return r;
    };
    const long m = pr.m();
    PiSeries dg[4] = {pw(mu, m), pw(mu, pr.kg + 1) * pw(qinv, pr.kf + 1), pw(mu, pr.kf + 1) * pw(qinv, pr.kg + 1),
                      pw(qinv, m)};
    SMat A0 = frobenius_A0(pr);
    PMat r(4, std::vector<Poly>(4, Poly(F, N)));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (!A0[i][j].is_exact_zero()) r[i][j] = (dg[j] * A0[i][j]).c;
    return r;
}

Poly wach_normalizer_pi(const Field* F, long m) {
    const long p = F->p;
    PiSeries r = mu_series(F, p - 1);
    PiSeries s = PiSeries::constant(Scalar::one(F), p - 1);
    for (long i = 0; i < m; ++i) s = s * r;
    Poly out = s.c;
    out.trim();
    return out;
}

// ---------------------------------------------------------------- bundle

LogMatrixBundle build_bundle(const FormPair& pair, const mpz_class& u, int n_max, long prec, long guard) {
    if (n_max < 0) fail(Err::InvalidInput, "levels must be non-negative");
    set_default_prec(prec + guard);
    LogMatrixBundle B;
    B.pair = pair;
    B.prec = prec;
    B.guard = guard;
    B.n_max = n_max;
    const long p = pair.p;
    const long m = pair.m();
    const Field* F = prime_field(p);
    const Field* E = pair.E.F;
    B.R = LambdaRing(F, u, prec + guard);
    B.RE = LambdaRing(E, u, prec + guard);

    B.Af = smat_zero(F, 2, 2);
    B.Ag = smat_zero(F, 2, 2);
    {
        SMat af = a0_h(F, pair.apf, pair.epsf), ag = a0_h(F, pair.apg, pair.epsg);
        for (int i = 0; i < 2; ++i) {
            B.Af[i][0] = af[i][0];
            B.Ag[i][0] = ag[i][0];
            B.Af[i][1] = shift_p(af[i][1], -(pair.kf + 1));
            B.Ag[i][1] = shift_p(ag[i][1], -(pair.kg + 1));
        }
    }
    B.A0 = frobenius_A0(pair);
    B.A = frobenius_A(pair);
    build_Q_D(pair, &B.Q, &B.D);
    B.Qinv = inverse(B.Q);
    {
        long v = 0;
        for (auto& row : B.Qinv)
            for (auto& x : row)
                if (!x.is_zero()) v = std::min(v, x.val_floor());
        B.cQ = -v;
    }
    SMat check = B.Qinv * embed_mat(E, B.A) * B.Q;
    CheckRecord qd{"Q_diagonalizes_A", "Q^-1 A Q = D", 0, INF, smat_same(check, B.D), ""};
    B.ledger.push_back(qd);
    if (!qd.pass) fail(Err::CheckFailed, "Q^-1 A Q differs from D");

    B.P_N = std::max<long>(2 * p, m + 1);
    B.P_pi = displayed_P_pi(pair, F, B.P_N);
    B.Pinv_pi = displayed_P_inverse_pi(pair, F);
    B.r_pi = wach_normalizer_pi(F, m);
    B.Pw_inv_pi = B.Pinv_pi;
    for (auto& row : B.Pw_inv_pi)
        for (auto& x : row)
            if (!x.is_zero()) {
                x = x * B.r_pi;
                x.trim();
            }
    B.Pw_inv = B.Pw_inv_pi;
    for (auto& row : B.Pw_inv)
        for (auto& x : row) x = pi_to_y(x);

    B.T.push_back(B.Pw_inv);
    for (int k = 1; k < n_max; ++k) {
        long pk = ipow(p, k).get_si();
        B.T.push_back(pmat_mul(pmat_phi(B.Pw_inv, pk), B.T[k - 1]));
    }
    B.Mtrunc.push_back(pmat_identity(F, 4));
    for (int n = 1; n <= n_max; ++n) B.Mtrunc.push_back(pmat_left(smat_pow(B.A, n), B.T[n - 1]));

    Poly Y = Poly::monomial(F, 1, Scalar::one(F));
    for (int n = 0; n <= n_max; ++n) {
        PMat base = (n == 0) ? pmat_identity(F, 4) : pmat_phi(B.T[n - 1], p);
        for (auto& row : base)
            for (auto& x : row) {
                x = x * Y;
                x.trim();
            }
        B.Hy.push_back(base);
        const long N = ipow(p, n + 1).get_si();
        LMat H(4, std::vector<LambdaElement>(4));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Poly red = reduce_pi_power(base[i][j], N, m);
                H[i][j] = mellin_inverse(B.R, red, n, m);
            }
        B.H.push_back(H);
        B.Mlog.push_back(lmat_left(smat_pow(B.A, n + 1), H));
    }
    auto c1 = p_inverse_checks(B);
    auto c2 = congruence_checks(B);
    B.ledger.insert(B.ledger.end(), c1.begin(), c1.end());
    B.ledger.insert(B.ledger.end(), c2.begin(), c2.end());
    return B;
}

// ---------------------------------------------------------------- checks

std::vector<CheckRecord> p_inverse_checks(const LogMatrixBundle& B) {
    std::vector<CheckRecord> out;
    const FormPair& pr = B.pair;
    const Field* F = prime_field(pr.p);
    Poly q = Poly::from_ints(F, q_coeffs(pr.p));
    const long e[4] = {0, pr.kf + 1, pr.kg + 1, pr.m()};
    for (int which = 0; which < 2; ++which) {
        const PMat& M = which == 0 ? B.Pinv_pi : B.Pw_inv_pi;
        const std::string tag = which == 0 ? "P_inverse" : "P_wach_inverse";
        long minv = INF;
        for (auto& row : M)
            for (auto& x : row) minv = std::min(minv, x.min_val_floor());
        out.push_back({tag + "_integral", "P^-1 has integral entries", 0, minv, minv >= 0, ""});
        for (int i = 1; i < 4; ++i) {
            Poly qe = poly_pow(q, e[i]);
            // q is not monic; compare with the exact product instead
            long worst = INF;
            for (int j = 0; j < 4; ++j) {
                const Poly& x = M[i][j];
                if (x.is_zero()) continue;
                // divide by q^e through the monic Y-form: q(pi) = Phi_p(1+pi)
                Poly xy = pi_to_y(x), qy = pi_to_y(qe);
                long rv = 0;
                quo_exact(xy, qy, &rv);
                worst = std::min(worst, rv);
            }
            out.push_back({tag + "_row" + std::to_string(i + 1) + "_q_power",
                           "row " + std::to_string(i + 1) + " of P^-1 divisible by q^" + std::to_string(e[i]), 0, worst,
                           worst >= INF, ""});
        }
    }
    // displayed P at pi = 0 is A, and P P^-1 = I modulo pi^N
    bool at0 = true;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (!same(B.P_pi[i][j].coef(0), B.A[i][j])) at0 = false;
    out.push_back({"P_at_zero", "P(0) = A", 0, at0 ? INF : 0, at0, ""});
    long worst = INF;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Poly s(F, B.P_N);
            for (int k = 0; k < 4; ++k) s = s + mul_trunc(B.P_pi[i][k], B.Pinv_pi[k][j], B.P_N);
            if (i == j) s = s - one_poly(F);
            s.resize(B.P_N);
            worst = std::min(worst, residual_of(s));
        }
    out.push_back({"P_times_P_inverse", "P P^-1 = I", 0, worst, worst >= B.floor(), ""});
    return out;
}

std::vector<CheckRecord> congruence_checks(const LogMatrixBundle& B) {
    std::vector<CheckRecord> out;
    const long p = B.pair.p;
    const long m = B.m();
    const Field* F = prime_field(p);
    const long fl = B.floor();
    // M = I modulo pi^m
    for (int n = 1; n <= B.n_max; ++n) {
        long worst = INF;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Poly x = B.Mtrunc[n][i][j];
                if (i == j) x = x - one_poly(F);
                Poly xp = y_to_pi(x);
                for (long k = 0; k < std::min<long>(m, xp.n); ++k) {
                    Scalar c = xp.coef(k);
                    worst = std::min(worst, c.is_zero() ? (c.exact() ? INF : c.pr) : c.val_floor());
                }
            }
        out.push_back({"M_identity_mod_pi_m", "M = I mod pi^(kf+kg+2)", n, worst, worst >= fl, ""});
    }
    // functional equation, on the overlap modulo phi^n(pi^m)
    for (int n = 1; n <= B.n_max; ++n) {
        const long pn = ipow(p, n).get_si();
        Poly modn = y_power_minus_one(F, pn, m);
        PMat rhs = pmat_left(B.A, pmat_mul(pmat_phi(B.Mtrunc[n], p), B.Pw_inv));
        long worst = INF;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Poly d = B.Mtrunc[n][i][j] - rhs[i][j];
                worst = std::min(worst, residual_of(rem(d, modn)));
            }
        out.push_back({"functional_equation", "M = A phi(M) P^-1", n, worst, worst >= fl, ""});
    }
    // coherence between consecutive levels modulo phi^n(pi^m)
    for (int n = 1; n < B.n_max; ++n) {
        const long pn = ipow(p, n).get_si();
        Poly modn = y_power_minus_one(F, pn, m);
        long worst = INF;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) worst = std::min(worst, residual_of(rem(B.Mtrunc[n + 1][i][j] - B.Mtrunc[n][i][j], modn)));
        out.push_back({"M_level_coherence", "consecutive truncations of M agree mod phi^n(pi^m)", n, worst, worst >= fl, ""});
    }
    // logarithmic matrix: both routes, and the defining relation
    Poly Y = Poly::monomial(F, 1, Scalar::one(F));
    for (int n = 0; n <= B.n_max; ++n) {
        const long N = ipow(p, n + 1).get_si();
        PMat direct = pmat_left(B.A, pmat_phi(B.Mtrunc[n], p));
        long worst = INF, worst_def = INF;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Poly y = reduce_pi_power(direct[i][j] * Y, N, m);
                LambdaElement via = mellin_inverse(B.R, y, n, m);
                LambdaElement d = via - B.Mlog[n][i][j];
                worst = std::min(worst, d.is_zero() ? INF : d.min_val());
                Poly back = mellin_forward(B.Mlog[n][i][j], n, m);
                worst_def = std::min(worst_def, residual_of(back - y));
            }
        out.push_back({"Mlog_two_routes", "M_log = A^(n+1) H_n mod omega_{n,m}", n, worst, worst >= fl, ""});
        out.push_back({"Mlog_defining_relation", "Mellin(M_log) = (1+pi) A phi(M)", n, worst_def, worst_def >= fl, ""});
    }
    // H_n integrality and row divisibility
    for (int n = 0; n <= B.n_max; ++n) {
        long v = INF;
        for (auto& row : B.H[n])
            for (auto& x : row) v = std::min(v, x.min_val());
        out.push_back({"H_integral", "H_n has integral entries", n, v, v >= 0, ""});
        if (n == 0) continue;
        const long e[4] = {0, B.pair.kf + 1, B.pair.kg + 1, m};
        for (int i = 1; i < 4; ++i) {
            Poly Phi = modulus_z(B.R, Modulus::phi(n, e[i]));
            long worst = INF;
            for (int j = 0; j < 4; ++j)
                for (auto& c : B.H[n][i][j].comp) worst = std::min(worst, residual_of(rem(c, Phi)));
            out.push_back({"H_row" + std::to_string(i + 1) + "_divisibility",
                           "row " + std::to_string(i + 1) + " of H_n divisible by Phi_{n," + std::to_string(e[i]) + "}",
                           n, worst, worst >= fl, ""});
        }
    }
    // tower coherence of M_log
    for (int n = 0; n < B.n_max; ++n) {
        long worst = INF;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                LambdaElement d = B.Mlog[n + 1][i][j].reduced(Modulus::omega(n, m)) - B.Mlog[n][i][j];
                worst = std::min(worst, d.is_zero() ? INF : d.min_val());
            }
        out.push_back({"Mlog_tower_coherence", "level n+1 of M_log reduces to level n", n, worst, worst >= fl, ""});
    }
    return out;
}

// ---------------------------------------------------------------- group ring pieces

std::vector<Poly> group_ring_pieces(const LambdaRing& R, const std::vector<Poly>& ys, int k, long i, int e) {
    const long p = R.p;
    const Field* F = R.F;
    const long W = R.prec;
    const long pk = ipow(p, k).get_si();
    const long K = W + k + 3;
    const mpz_class modK = ipow(p, K);
    const mpz_class logu = zp_log(R.u, p, K) / p;
    mpz_class logu_inv;
    {
        mpz_class mk = ipow(p, K - 1);
        if (!mpz_invert(logu_inv.get_mpz_t(), logu.get_mpz_t(), mk.get_mpz_t()))
            fail(Err::InvalidInput, "log u is not p times a unit");
    }
    const Scalar c = R.u_pow(i * pk);
    Scalar cinv = inv(c).with_prec(W);
    std::vector<Scalar> cinv_pow(e, Scalar::one(F));
    for (int r = 1; r < e; ++r) cinv_pow[r] = cinv_pow[r - 1] * cinv;

    struct Term {
        long s0;
        std::vector<Scalar> w;   // rho^i C(t, r) c^-r, r < e
    };
    std::map<long, Term> cache;
    auto term_for = [&](long a) -> const Term& {
        auto it = cache.find(a);
        if (it != cache.end()) return it->second;
        if (a % p != 1 % p) fail(Err::Unsupported, "group ring lift must be supported on a = 1 mod p");
        mpz_class la = zp_log(mpz_class(a), p, K) / p;
        mpz_class s = (la * logu_inv) % ipow(p, K - 1);
        if (s < 0) s += ipow(p, K - 1);
        mpz_class s0z = s % pk;
        long s0 = s0z.get_si();
        mpz_class t = (s - s0z) / pk;
        // rho = a / u^s0
        mpz_class us0;
        mpz_pow_ui(us0.get_mpz_t(), R.u.get_mpz_t(), s0);
        Scalar rho = Scalar::rational(F, mpq_class(mpz_class(a), us0), W);
        Scalar rho_i = pow(rho, i);
        Term T{s0, {}};
        for (int r = 0; r < e; ++r) T.w.push_back(rho_i * Scalar::integer(F, binom(t, r), W) * cinv_pow[r]);
        return cache.emplace(a, std::move(T)).first->second;
    };

    std::vector<Poly> out;
    for (const Poly& y : ys) {
        std::vector<std::vector<Scalar>> acc(e, std::vector<Scalar>(pk, Scalar::zero(F)));
        for (long a = 0; a < y.n; ++a) {
            if (y.mant_zero(a)) continue;
            const Term& T = term_for(a);
            Scalar ya = y.coef(a);
            for (int r = 0; r < e; ++r) acc[r][T.s0] = acc[r][T.s0] + ya * T.w[r];
        }
        // expand sum_r acc[r](Z) (W - c)^r with W = Z^pk
        std::vector<Scalar> coef(e * pk, Scalar::zero(F));
        for (int r = 0; r < e; ++r)
            for (int l = 0; l <= r; ++l) {
                Scalar f = Scalar::integer(F, binom(r, l)) * pow(-c, r - l);
                for (long s0 = 0; s0 < pk; ++s0)
                    if (!acc[r][s0].is_exact_zero()) coef[s0 + pk * l] = coef[s0 + pk * l] + acc[r][s0] * f;
            }
        out.push_back(Poly::from_scalars(F, coef));
    }
    return out;
}

// ---------------------------------------------------------------- determinant

namespace {
// lift of A^(k+1) H_k restricted to one piece, as a ModPoly matrix
std::vector<std::vector<ModPoly>> lift_piece(const LogMatrixBundle& B, int k, long i, int e, const Poly* mod,
                                             bool with_A) {
    std::vector<Poly> ys;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) ys.push_back(B.Hy[k][r][c]);
    auto pieces = group_ring_pieces(B.R, ys, k, i, e);
    std::vector<std::vector<ModPoly>> H(4, std::vector<ModPoly>(4));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) H[r][c] = {rem(pieces[4 * r + c], *mod), mod};
    if (!with_A) return H;
    SMat Ak = smat_pow(B.A, k + 1);
    std::vector<std::vector<ModPoly>> out(4, std::vector<ModPoly>(4));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            Poly s(B.R.F, 0);
            for (int t = 0; t < 4; ++t)
                if (!Ak[r][t].is_exact_zero()) s = s + H[t][c].v * Ak[r][t];
            out[r][c] = {s, mod};
        }
    return out;
}

std::vector<std::vector<ModPoly>> as_mod(const PMat& a, const Poly* mod) {
    std::vector<std::vector<ModPoly>> r(a.size(), std::vector<ModPoly>(a[0].size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) r[i][j] = {rem(a[i][j], *mod), mod};
    return r;
}

int expected_multiplicity(const FormPair& pr, long i) {
    return 1 + (i <= std::min(pr.kf, pr.kg) ? 1 : 0) + (i <= std::max(pr.kf, pr.kg) ? 1 : 0);
}
}  // namespace

PMat mlog_lift_piece(const LogMatrixBundle& B, int k, long i, int e) {
    Poly mod = poly_pow(tw_omega_z(B.R, k, i), e);
    auto M = lift_piece(B, k, i, e, &mod, true);
    PMat r(4, std::vector<Poly>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) r[a][b] = M[a][b].v;
    return r;
}

Poly pmat_det_mod(const PMat& a, const Poly& mod) { return det_generic(as_mod(a, &mod)).v; }

PMat pmat_adj_mod(const PMat& a, const Poly& mod) {
    auto ad = adj_generic(as_mod(a, &mod));
    PMat r(a.size(), std::vector<Poly>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) r[i][j] = ad[i][j].v;
    return r;
}

DetReport det_structure_check(const LogMatrixBundle& B, int n) {
    DetReport rep;
    const long m = B.m();
    const long fl = B.floor();
    // reduced representative
    LambdaElement d = lmat_det(B.Mlog[n]);
    for (int k = 1; k <= n; ++k)
        for (long i = 0; i < m; ++i) {
            Poly r = rem(d.comp[0], tw_phi_z(B.R, k, i));
            if (!(r.is_zero() || r.min_val_floor() >= fl)) {
                rep.vanishes = false;
                rep.detail += "reduced det does not vanish on Tw^-" + std::to_string(i) + "Phi_" + std::to_string(k) + "; ";
            }
        }
    for (long j = 0; j < m; ++j) {
        Scalar v = eval(d.comp[0], B.R.u_pow(j));
        if (v.is_zero() || v.val_floor() >= fl) {
            rep.nonzero_level0 = false;
            rep.detail += "det vanishes at u^" + std::to_string(j) + " - 1; ";
        }
    }
    // multiplicities on the exact lifts
    const int e = 4;
    for (int k = 1; k <= n; ++k)
        for (long i = 0; i < m; ++i) {
            Poly mod = poly_pow(tw_omega_z(B.R, k, i), e);
            auto M = lift_piece(B, k, i, e, &mod, true);
            Poly det = det_generic(M).v;
            Poly f = tw_phi_z(B.R, k, i);
            int mult = 0;
            while (mult < e) {
                Poly q, r;
                divrem(det, f, &q, &r);
                if (!(r.is_zero() || r.min_val_floor() >= fl)) break;
                ++mult;
                det = q;
            }
            MultiplicityRow row{k, i, mult, expected_multiplicity(B.pair, i)};
            rep.rows.push_back(row);
            if (row.found != row.expected) {
                rep.detail += "multiplicity " + std::to_string(mult) + " at twist " + std::to_string(i) + " level " +
                              std::to_string(k) + "; ";
            }
        }
    rep.pass = rep.vanishes && rep.nonzero_level0;
    for (auto& r : rep.rows) rep.pass = rep.pass && r.found == r.expected;
    return rep;
}

// ---------------------------------------------------------------- adjugate

bool adj_literal_divisible(const LMat& M, const Modulus& N, const LambdaRing& R, long fl) {
    LMat adj = lmat_adj(M);
    Poly Nz = modulus_z(R, N);
    for (auto& row : adj)
        for (auto& x : row)
            for (auto& c : x.comp) {
                Poly r = rem(c, Nz);
                if (!(r.is_zero() || r.min_val_floor() >= fl)) return false;
            }
    return true;
}

AdjReport adj_divisibility_check(const LogMatrixBundle& B, int n) {
    AdjReport rep;
    const FormPair& pr = B.pair;
    const long a = pr.kf + 1, b = pr.kg + 1, m = B.m();
    const long fl = B.floor();
    LMat adj = lmat_adj(B.Mlog[n]);
    Modulus Nmax = Modulus::frak(n, std::max(a, b));
    Poly Nz = modulus_z(B.R, Nmax);
    rep.quotient = adj;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Poly q, r;
            divrem(adj[i][j].comp[0], Nz, &q, &r);
            if (!(r.is_zero() || r.min_val_floor() >= fl)) {
                rep.literal = false;
                rep.detail += "adj(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") remainder valuation " +
                              std::to_string(r.min_val_floor()) + "; ";
            }
            for (auto& c : rep.quotient[i][j].comp) c = q;
        }
    for (int k = 1; k <= n; ++k)
        for (long l = 0; l < m; ++l) {
            const int extra = (l < a ? 1 : 0) + (l < b ? 1 : 0);
            if (extra == 0) continue;
            Poly mod = poly_pow(tw_omega_z(B.R, k, l), 1 + extra);
            auto M = lift_piece(B, k, l, 1 + extra, &mod, true);
            auto ad = adj_generic(M);
            Poly f = poly_pow(tw_phi_z(B.R, k, l), extra);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    Poly r = rem(ad[i][j].v, f);
                    if (!(r.is_zero() || r.min_val_floor() >= fl)) {
                        rep.fattened = false;
                        rep.detail += "lift adj(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                      ") not divisible at twist " + std::to_string(l) + " level " + std::to_string(k) +
                                      "; ";
                    }
                }
        }
    rep.pass = rep.literal && rep.fattened;
    return rep;
}

// ---------------------------------------------------------------- growth

LMat qinv_mlog(const LogMatrixBundle& B, int n) { return lmat_left(B.Qinv, lmat_embed(B.RE, B.Mlog[n])); }

GrowthReport growth_check(const LogMatrixBundle& B, int n) {
    GrowthReport rep;
    LMat X = qinv_mlog(B, n);
    const Scalar lam[4] = {B.pair.alpha_f * B.pair.alpha_g, B.pair.alpha_f * B.pair.beta_g,
                           B.pair.beta_f * B.pair.alpha_g, B.pair.beta_f * B.pair.beta_g};
    const int e = B.pair.E.F->e;
    for (int i = 0; i < 4; ++i) {
        long v = INF;   // in units of 1/e
        for (int j = 0; j < 4; ++j)
            for (auto& c : X[i][j].comp) v = std::min(v, c.min_val_e());
        GrowthRow row;
        row.level = n;
        row.index = i;
        row.min_val = v >= INF ? mpq_class(INF) : mpq_class(v, e);
        row.bound = -mpq_class(n + 1) * scalar_val(lam[i]) - mpq_class(B.cQ);
        row.pass = row.min_val >= row.bound;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    for (auto& row : B.H[n])
        for (auto& x : row)
            if (!x.integral()) rep.H_integral = false;
    rep.pass = rep.pass && rep.H_integral;
    return rep;
}

std::vector<int> filtration_generators(const FormPair& pr, int j) {
    std::vector<int> g = {0};
    if (j >= pr.kf + 1) g.push_back(1);
    if (j >= pr.kg + 1) g.push_back(2);
    if (j >= pr.m()) g.push_back(3);
    return g;
}

}  // namespace rs
