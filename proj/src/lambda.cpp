#include "rs/lambda.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <sstream>

#include "rs/linalg.hpp"
#include "rs/roots.hpp"

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

long vp_factorial(long n, long p) {
    long v = 0;
    for (long q = p; q <= n; q *= p) v += n / q;
    return v;
}

mpz_class posmod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}
}  // namespace

// ---------------------------------------------------------------- ring

LambdaRing::LambdaRing(const Field* F_, const mpz_class& u_, long prec_) : p(F_->p), u(u_), F(F_), prec(prec_) {
    mpz_class d = u - 1;
    if (d == 0 || vp(d, p) != 1) fail(Err::InvalidInput, "u must satisfy v_p(u - 1) = 1");
}

Scalar LambdaRing::u_pow(long k) const {
    if (k >= 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), u.get_mpz_t(), k);
        return Scalar::integer(F, r);
    }
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), u.get_mpz_t(), -k);
    return Scalar::rational(F, mpq_class(1, r), prec);
}

mpz_class LambdaRing::teich_int(long t, long K) const {
    long tt = ((t % p) + p) % p;
    if (tt == 0) fail(Err::InvalidInput, "Teichmuller index must be prime to p");
    if (tt == 1) return 1;
    return teichmuller_int(tt, p, K);
}

Scalar LambdaRing::teich(long t) const {
    long tt = ((t % p) + p) % p;
    if (tt == 1) return Scalar::one(F);
    return Scalar::integer(F, teich_int(t, prec), prec);
}

// ---------------------------------------------------------------- modulus

Modulus Modulus::omega(int n, int m) {
    Modulus M;
    for (int k = 0; k <= n; ++k)
        for (long i = 0; i < m; ++i) M.mult[{k, i}] = 1;
    return M;
}

Modulus Modulus::phi(int n, int m) {
    Modulus M;
    for (long i = 0; i < m; ++i) M.mult[{n, i}] = 1;
    return M;
}

Modulus Modulus::frak(int n, int m) {
    Modulus M;
    for (int k = 1; k <= n; ++k)
        for (long i = 0; i < m; ++i) M.mult[{k, i}] = 1;
    return M;
}

Modulus Modulus::twisted_phi(int k, long i, int e) {
    Modulus M;
    M.mult[{k, i}] = e;
    return M;
}

Modulus Modulus::operator*(const Modulus& o) const {
    Modulus r = *this;
    for (auto& [key, e] : o.mult) r.mult[key] += e;
    return r;
}

bool Modulus::divides(const Modulus& o) const {
    for (auto& [key, e] : mult) {
        auto it = o.mult.find(key);
        if (it == o.mult.end() || it->second < e) return false;
    }
    return true;
}

Modulus Modulus::twisted(long s) const {
    Modulus r;
    for (auto& [key, e] : mult) r.mult[{key.first, key.second - s}] = e;
    return r;
}

long Modulus::degree(long p) const {
    long d = 0;
    for (auto& [key, e] : mult) {
        long dk = 1;
        if (key.first > 0) {
            dk = p - 1;
            for (int j = 1; j < key.first; ++j) dk *= p;
        }
        d += dk * e;
    }
    return d;
}

int Modulus::level() const {
    int n = 0;
    for (auto& [key, e] : mult) n = std::max(n, key.first);
    return n;
}

std::string Modulus::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [key, e] : mult) {
        if (!first) os << "*";
        first = false;
        os << "Tw^" << -key.second << "Phi_" << key.first;
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

Poly tw_omega_z(const LambdaRing& R, int k, long i) {
    const long pk = ipow(R.p, k).get_si();
    Poly r(R.F, pk + 1);
    r.set(pk, Scalar::one(R.F));
    r.set(0, -R.u_pow(i * pk));
    return r;
}

Poly tw_phi_z(const LambdaRing& R, int k, long i) {
    if (k == 0) {
        Poly r(R.F, 2);
        r.set(1, Scalar::one(R.F));
        r.set(0, -R.u_pow(i));
        return r;
    }
    const long step = ipow(R.p, k - 1).get_si();
    Poly r(R.F, (R.p - 1) * step + 1);
    for (long j = 0; j < R.p; ++j) r.set(j * step, R.u_pow(i * (R.p - 1 - j) * step));
    return r;
}

namespace {
std::mutex g_mod_mu;
std::map<std::tuple<const Field*, std::string, std::string, long>, Poly> g_mod_cache;
}  // namespace

Poly modulus_z(const LambdaRing& R, const Modulus& M) {
    auto key = std::make_tuple(R.F, R.u.get_str(), M.str(), R.prec);
    {
        std::lock_guard<std::mutex> lk(g_mod_mu);
        auto it = g_mod_cache.find(key);
        if (it != g_mod_cache.end()) return it->second;
    }
    Poly r = Poly::from_scalars(R.F, {Scalar::one(R.F)});
    for (auto& [kk, e] : M.mult) {
        Poly f = tw_phi_z(R, kk.first, kk.second);
        for (int t = 0; t < e; ++t) r = r * f;
    }
    r.trim();
    std::lock_guard<std::mutex> lk(g_mod_mu);
    g_mod_cache.emplace(key, r);
    return r;
}

Poly z_to_x(const Poly& a) { return taylor_shift(a, Scalar::one(a.F)); }
Poly x_to_z(const Poly& a) { return taylor_shift(a, Scalar::integer(a.F, -1)); }

Poly omega_x(const Field* F, int n) {
    const long pn = ipow(F->p, n).get_si();
    Poly z(F, pn + 1);
    z.set(pn, Scalar::one(F));
    z.set(0, Scalar::integer(F, -1));
    Poly x = z_to_x(z);
    x.trim();
    return x;
}

Poly phi_x(const Field* F, int n) {
    if (n == 0) return omega_x(F, 0);
    const long step = ipow(F->p, n - 1).get_si();
    Poly z(F, (F->p - 1) * step + 1);
    for (long j = 0; j < F->p; ++j) z.set(j * step, Scalar::one(F));
    Poly x = z_to_x(z);
    x.trim();
    return x;
}

// ---------------------------------------------------------------- elements

LambdaElement LambdaElement::zero(const LambdaRing& R, const Modulus& M) {
    LambdaElement a;
    a.R = R;
    a.mod = M;
    a.comp.assign(R.p - 1, Poly(R.F, M.degree(R.p)));
    return a;
}

LambdaElement LambdaElement::constant(const LambdaRing& R, const Modulus& M, const Scalar& c) {
    LambdaElement a = zero(R, M);
    for (auto& x : a.comp) x.set(0, c);
    a.reduce();
    return a;
}

LambdaElement LambdaElement::from_gamma_poly(const LambdaRing& R, const Modulus& M, const Poly& z) {
    LambdaElement a = zero(R, M);
    for (auto& x : a.comp) x = z;
    a.reduce();
    return a;
}

LambdaElement LambdaElement::from_x_poly(const LambdaRing& R, const Modulus& M, const Poly& x) {
    return from_gamma_poly(R, M, x_to_z(x));
}

void LambdaElement::reduce() {
    Poly Mz = modulus_z(R, mod);
    const long d = Mz.n - 1;
    for (auto& x : comp) {
        if (x.n > d) x = rem(x, Mz);
        x.resize(d);
        x.reduce();
    }
}

LambdaElement LambdaElement::reduced(const Modulus& M) const {
    if (!M.divides(mod)) fail(Err::LevelMismatch, "target modulus does not divide the current one");
    LambdaElement a = *this;
    a.mod = M;
    Poly Mz = modulus_z(R, M);
    for (auto& x : a.comp) {
        x = rem(x, Mz);
        x.resize(Mz.n - 1);
        x.reduce();
    }
    return a;
}

long LambdaElement::min_val() const {
    long v = INF;
    for (auto& x : comp) v = std::min(v, x.min_val_floor());
    return v;
}

bool LambdaElement::integral() const { return min_val() >= 0; }

bool LambdaElement::is_zero() const {
    for (auto& x : comp)
        if (!x.is_zero()) return false;
    return true;
}

LambdaElement LambdaElement::with_prec(long prec) const {
    LambdaElement a = *this;
    for (auto& x : a.comp) x = x.with_prec(prec);
    return a;
}

namespace {
void check_compatible(const LambdaElement& a, const LambdaElement& b) {
    if (!(a.mod == b.mod)) fail(Err::LevelMismatch, "moduli differ: " + a.mod.str() + " vs " + b.mod.str());
}
}  // namespace

LambdaElement operator+(const LambdaElement& a, const LambdaElement& b) {
    check_compatible(a, b);
    LambdaElement r = a;
    for (size_t i = 0; i < r.comp.size(); ++i) r.comp[i] = a.comp[i] + b.comp[i];
    return r;
}

LambdaElement operator-(const LambdaElement& a, const LambdaElement& b) {
    check_compatible(a, b);
    LambdaElement r = a;
    for (size_t i = 0; i < r.comp.size(); ++i) r.comp[i] = a.comp[i] - b.comp[i];
    return r;
}

namespace {
bool identical(const Poly& a, const Poly& b) { return a.n == b.n && a.ex == b.ex && a.pr == b.pr && a.c == b.c; }
}  // namespace

LambdaElement operator*(const LambdaElement& a, const LambdaElement& b) {
    check_compatible(a, b);
    LambdaElement r = a;
    Poly Mz = modulus_z(a.R, a.mod);
    for (size_t i = 0; i < r.comp.size(); ++i) {
        // elements supported on Gamma_1 have identical components
        if (i > 0 && identical(a.comp[i], a.comp[i - 1]) && identical(b.comp[i], b.comp[i - 1])) {
            r.comp[i] = r.comp[i - 1];
            continue;
        }
        r.comp[i] = rem(a.comp[i] * b.comp[i], Mz);
        r.comp[i].resize(Mz.n - 1);
        r.comp[i].reduce();
    }
    return r;
}

LambdaElement operator*(const LambdaElement& a, const Scalar& s) {
    LambdaElement r = a;
    for (auto& x : r.comp) x = x * s;
    return r;
}

bool same(const LambdaElement& a, const LambdaElement& b) {
    if (!(a.mod == b.mod)) return false;
    for (size_t i = 0; i < a.comp.size(); ++i)
        if (!(a.comp[i] - b.comp[i]).is_zero()) return false;
    return true;
}

LambdaElement tw(const LambdaElement& a, long s) {
    const long q = a.R.p - 1;
    LambdaElement r = a;
    r.mod = a.mod.twisted(s);
    for (long i = 0; i < q; ++i) {
        const Poly& src = a.comp[(((i + s) % q) + q) % q];
        Poly x = src;
        Scalar us = a.R.u_pow(s), w = Scalar::one(a.R.F);
        for (long k = 0; k < x.n; ++k) {
            if (!x.mant_zero(k)) x.set(k, x.coef(k) * w);
            w = w * us;
        }
        x.reduce();
        r.comp[i] = x;
    }
    return r;
}

FrakRep frak_n_representative(const LambdaRing& R, int m, int n) {
    if (m < 1 || n < 0) fail(Err::InvalidInput, "frak representative needs m >= 1, n >= 0");
    return {modulus_z(R, Modulus::frak(n, m)), -(long)n * m};
}

// ---------------------------------------------------------------- Mellin

std::vector<std::vector<Scalar>> mellin_table(const Poly& y, long N, int m) {
    const Field* F = y.F;
    std::vector<std::vector<Scalar>> G(N, std::vector<Scalar>(m, Scalar::zero(F)));
    for (long a = 0; a < y.n; ++a) {
        if (y.mant_zero(a)) continue;
        Scalar c = y.coef(a);
        long r = a % N, k = a / N;
        for (int j = 0; j < m && j <= k; ++j) {
            if (j == 0)
                G[r][0] = G[r][0] + c;
            else
                G[r][j] = G[r][j] + c * Scalar::integer(F, binom(k, j));
        }
    }
    return G;
}

Poly from_mellin_table(const Field* F, const std::vector<std::vector<Scalar>>& G, long N) {
    const int m = G.empty() ? 0 : G[0].size();
    Poly out(F, N * m);
    std::vector<Scalar> acc(N * m, Scalar::zero(F));
    for (long r = 0; r < N; ++r)
        for (int j = 0; j < m; ++j) {
            if (G[r][j].is_exact_zero()) continue;
            // (Y^N - 1)^j = sum_i C(j,i) (-1)^(j-i) Y^(N i)
            for (int i = 0; i <= j; ++i) {
                mpz_class b = binom(j, i);
                if ((j - i) % 2) b = -b;
                acc[r + N * i] = acc[r + N * i] + G[r][j] * Scalar::integer(F, b);
            }
        }
    return Poly::from_scalars(F, acc);
}

Poly reduce_pi_power(const Poly& y, long N, int m) { return from_mellin_table(y.F, mellin_table(y, N, m), N); }

bool psi_zero(const Poly& y, long N, int m, long floor) {
    auto G = mellin_table(y, N, m);
    const long p = y.F->p;
    for (long r = 0; r < N; r += p)
        for (int j = 0; j < m; ++j)
            if (!G[r][j].is_zero() && G[r][j].val_floor() < floor) return false;
    return true;
}

namespace {
// Delta-isotypic parts c_t with lambda = sum_t sigma_omega(t) c_t(gamma).
std::vector<Poly> isotypic_parts(const LambdaElement& a) {
    const LambdaRing& R = a.R;
    const long q = R.p - 1;
    std::vector<Poly> c(q + 1);
    bool uniform = true;
    for (long i = 1; i < q; ++i)
        if (!identical(a.comp[i], a.comp[0])) uniform = false;
    if (uniform) {
        c[1] = a.comp[0];
        return c;
    }
    Scalar invq = inv(Scalar::integer(R.F, q)).with_prec(R.prec);
    for (long t = 1; t <= q; ++t) {
        Scalar w = R.teich(t);
        Scalar winv = inv(w).with_prec(R.prec);
        Poly s(R.F, a.comp[0].n);
        Scalar pw = Scalar::one(R.F);
        for (long i = 0; i < q; ++i) {
            s = s + a.comp[i] * pw;
            pw = pw * winv;
        }
        c[t] = s * invq;
    }
    return c;
}
}  // namespace

Poly mellin_forward(const LambdaElement& a, int n, int m) {
    const LambdaRing& R = a.R;
    if (!(a.mod == Modulus::omega(n, m)))
        fail(Err::LevelMismatch, "Mellin transform at level (" + std::to_string(n) + "," + std::to_string(m) +
                                     ") needs modulus omega_{n,m}, got " + a.mod.str());
    const long p = R.p;
    const mpz_class Nz = ipow(p, n + 1);
    const long N = Nz.get_si();
    const long P = N / p;
    auto c = isotypic_parts(a);
    std::vector<std::vector<Scalar>> G(N, std::vector<Scalar>(m, Scalar::zero(R.F)));
    const long K = R.prec + n + 2 + vp_factorial(m, p);
    const mpz_class modK = ipow(p, K);
    for (long t = 1; t < p; ++t) {
        if (c[t].n == 0 || c[t].is_zero()) continue;
        const bool ex = (t == 1);
        const mpz_class w = R.teich_int(t, K);
        mpz_class uk = 1;
        for (long k = 0; k < m * P; ++k) {
            if (k > 0) {
                uk *= R.u;
                if (!ex) uk = posmod(uk, modK);
            }
            if (k >= c[t].n || c[t].mant_zero(k)) continue;
            Scalar s = c[t].coef(k);
            mpz_class av = ex ? uk : posmod(w * uk, modK);
            mpz_class r = posmod(av, Nz);
            mpz_class cc = (av - r) / Nz;
            long ri = r.get_si();
            for (int j = 0; j < m; ++j) {
                Scalar b = ex ? Scalar::integer(R.F, binom(cc, j)) : Scalar::integer(R.F, binom(cc, j), R.prec);
                G[ri][j] = G[ri][j] + s * b;
            }
        }
    }
    return from_mellin_table(R.F, G, N);
}

LambdaElement mellin_inverse(const LambdaRing& R, const Poly& y, int n, int m) {
    const long p = R.p;
    const mpz_class Nz = ipow(p, n + 1);
    const long N = Nz.get_si();
    const long P = N / p;
    auto G = mellin_table(y, N, m);
    const long floor = std::min(R.prec, y.exact() ? INF : y.pr);
    for (long r = 0; r < N; r += p)
        for (int j = 0; j < m; ++j)
            if (!G[r][j].is_zero() && G[r][j].val_floor() < floor)
                fail(Err::NotPsiZero, "coefficient at Y^" + std::to_string(r) + " (j=" + std::to_string(j) +
                                          ") is " + G[r][j].str());
    const long K = R.prec + n + 2 + vp_factorial(m, p);
    const mpz_class modK = ipow(p, K);
    const mpz_class uP = [&] {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), R.u.get_mpz_t(), P);
        return r;
    }();
    std::vector<Poly> c(p);
    bool only_one = true;
    for (long t = 1; t < p; ++t) {
        const bool ex = (t == 1);
        const mpz_class w = R.teich_int(t, K);
        std::vector<Scalar> coeffs(m * P, Scalar::zero(R.F));
        bool any = false;
        mpz_class uk0 = 1;
        for (long k0 = 0; k0 < P; ++k0) {
            if (k0 > 0) {
                uk0 *= R.u;
                if (!ex) uk0 = posmod(uk0, modK);
            }
            mpz_class a0 = ex ? uk0 : posmod(w * uk0, modK);
            mpz_class r = posmod(a0, Nz);
            const long ri = r.get_si();
            bool nz = false;
            for (int j = 0; j < m; ++j)
                if (!G[ri][j].is_zero()) nz = true;
            if (!nz) continue;
            any = true;
            SMat B = smat_zero(R.F, m, m);
            mpz_class al = a0;
            for (int l = 0; l < m; ++l) {
                if (l > 0) {
                    al *= uP;
                    if (!ex) al = posmod(al, modK);
                }
                mpz_class cl = (al - r) / Nz;
                for (int j = 0; j < m; ++j)
                    B[j][l] = ex ? Scalar::integer(R.F, binom(cl, j)) : Scalar::integer(R.F, binom(cl, j), R.prec);
            }
            std::vector<Scalar> rhs(m);
            for (int j = 0; j < m; ++j) rhs[j] = G[ri][j];
            std::vector<Scalar> x = solve(B, rhs);
            for (int l = 0; l < m; ++l) coeffs[k0 + P * l] = x[l];
        }
        if (any) {
            c[t] = Poly::from_scalars(R.F, coeffs);
            if (t != 1) only_one = false;
        }
    }
    LambdaElement out = LambdaElement::zero(R, Modulus::omega(n, m));
    const long q = p - 1;
    if (only_one) {
        if (c[1].n > 0)
            for (auto& x : out.comp) x = c[1];
    } else {
        for (long i = 0; i < q; ++i) {
            Poly s(R.F, m * P);
            for (long t = 1; t < p; ++t) {
                if (c[t].n == 0) continue;
                s = s + c[t] * pow(R.teich(t), i);
            }
            out.comp[i] = s;
        }
    }
    for (auto& x : out.comp) {
        x.resize(m * P);
        x.reduce();
    }
    return out;
}

// ---------------------------------------------------------------- checks

namespace {
Poly cyclotomic_y(const Field* F, long N, long p) {
    // Phi_N(Y) = sum_{j<p} Y^(j N/p)
    const long step = N / p;
    Poly r(F, (p - 1) * step + 1);
    for (long j = 0; j < p; ++j) r.set(j * step, Scalar::one(F));
    return r;
}

Poly poly_pow(const Poly& a, int e) {
    Poly r = Poly::from_scalars(a.F, {Scalar::one(a.F)});
    for (int i = 0; i < e; ++i) r = r * a;
    r.trim();
    return r;
}
}  // namespace

MellinReport mellin_divisibility_check(const LambdaRing& R, int n, int m, int samples, unsigned long seed, bool perturb) {
    MellinReport rep;
    std::mt19937_64 rng(seed);
    const long p = R.p;
    const long N = ipow(p, n + 1).get_si();
    const Modulus Om = Modulus::omega(n, m);
    const long deg = Om.degree(p);
    const Poly qm = poly_pow(cyclotomic_y(R.F, N, p), m);
    const Poly phiZ = modulus_z(R, Modulus::phi(n, m));
    LambdaElement Phi = LambdaElement::from_gamma_poly(R, Om, phiZ);
    auto rnd = [&] { return mpz_class((long)(rng() % 19) - 9); };
    for (int s = 0; s < samples && rep.pass; ++s) {
        // forward direction
        LambdaElement lam = LambdaElement::zero(R, Om);
        for (auto& x : lam.comp) {
            std::vector<mpz_class> v(deg);
            for (auto& c : v) c = rnd();
            x = Poly::from_ints(R.F, v);
        }
        Poly y = mellin_forward(Phi * lam, n, m);
        if (perturb && s == 0) y.set(1, y.coef(1) + Scalar::one(R.F));
        long rv = 0;
        Poly quo = quo_exact(y, qm, &rv);
        bool ok = rv >= std::min(R.prec, y.exact() ? INF : y.pr);
        long qv = quo.min_val_floor();
        rep.min_quotient_val = std::min(rep.min_quotient_val, qv);
        if (!ok || qv < 0) {
            rep.pass = false;
            std::ostringstream os;
            os << "forward sample " << s << ": remainder valuation " << rv << ", quotient valuation " << qv;
            rep.witness = os.str();
            break;
        }
        // converse direction; for n = 0 the factor q^m is not a Frobenius image and
        // multiplying by it does not preserve psi = 0
        if (n == 0) {
            ++rep.samples;
            continue;
        }
        std::vector<std::vector<Scalar>> G(N, std::vector<Scalar>(m, Scalar::zero(R.F)));
        for (long r = 0; r < N; ++r) {
            if (r % p == 0) continue;
            for (int j = 0; j < m; ++j) G[r][j] = Scalar::integer(R.F, rnd());
        }
        Poly g = from_mellin_table(R.F, G, N);
        Poly h = reduce_pi_power(g * qm, N, m);
        LambdaElement back = mellin_inverse(R, h, n, m);
        for (size_t i = 0; i < back.comp.size(); ++i) {
            Poly r = rem(back.comp[i], phiZ);
            if (!r.is_zero() && r.min_val_floor() < R.prec - n - 2) {
                rep.pass = false;
                std::ostringstream os;
                os << "converse sample " << s << ": component " << i << " not divisible, remainder valuation "
                   << r.min_val_floor();
                rep.witness = os.str();
                break;
            }
        }
        ++rep.samples;
    }
    if (!rep.pass && rep.witness.empty()) rep.witness = "unknown";
    return rep;
}

Scalar eval_character(const LambdaElement& a, const CharSpec& chi) {
    const LambdaRing& R = a.R;
    const int k = std::max(chi.c - 1, 0);
    if (k > a.level()) fail(Err::ConductorExceedsLevel, "character conductor exceeds the level of the element");
    if (!a.mod.mult.count({k, chi.j}))
        fail(Err::LevelMismatch, "element is not defined modulo Tw^-" + std::to_string(chi.j) + "Phi_" +
                                     std::to_string(k));
    const long q = R.p - 1;
    const Poly& f = a.comp[(((chi.j + chi.i0) % q) + q) % q];
    const Composite& C = composite(R.F, k, R.prec);
    Scalar z = C.embed(R.u_pow(chi.j));
    if (k > 0) z = z * pow(C.zeta, chi.b);
    return eval(C.embed(f), z);
}

// ---------------------------------------------------------------- towers

bool DistApproximant::coherent(std::string* why) const {
    for (size_t n = 0; n + 1 < levels.size(); ++n) {
        LambdaElement r = levels[n + 1].reduced(Modulus::omega(n, m));
        if (!same(r, levels[n])) {
            if (why) *why = "level " + std::to_string(n + 1) + " does not reduce to level " + std::to_string(n);
            return false;
        }
    }
    return true;
}

bool DistApproximant::growth_ok(std::string* why) const {
    for (size_t n = 0; n < levels.size(); ++n) {
        long ve = INF;
        for (const auto& p : levels[n].comp) ve = std::min(ve, p.min_val_e());
        if (ve >= INF) continue;
        mpq_class v(ve, levels[n].R.F->e);
        mpq_class bound = -(growth_order * (long)n + c);
        if (v < bound) {
            if (why) *why = "level " + std::to_string(n) + " has valuation " + v.get_str();
            return false;
        }
    }
    return true;
}

}  // namespace rs
