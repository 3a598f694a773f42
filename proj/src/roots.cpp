#include "rs/roots.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <numeric>
#include <sstream>
#include <cstdio>
#include <cstdlib>

namespace rs {

namespace {

// ---------------------------------------------------------------- F_p and F_q helpers

using Fp = std::vector<long>;   // ascending coefficients mod p

void fp_trim(Fp& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

long fp_inv(long a, long p) {
    mpz_class r, aa = a, pp = p;
    mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), pp.get_mpz_t());
    return r.get_si();
}

Fp fp_rem(Fp a, const Fp& b, long p) {
    fp_trim(a);
    const long db = (long)b.size() - 1;
    const long li = fp_inv(b.back(), p);
    while ((long)a.size() - 1 >= db && !a.empty()) {
        long k = (long)a.size() - 1 - db;
        long c = a.back() * li % p;
        for (long j = 0; j <= db; ++j) a[k + j] = ((a[k + j] - c * b[j]) % p + p) % p;
        fp_trim(a);
    }
    return a;
}

Fp fp_mulmod(const Fp& a, const Fp& b, const Fp& m, long p) {
    if (a.empty() || b.empty()) return {};
    Fp r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return fp_rem(r, m, p);
}

Fp fp_gcd(Fp a, Fp b, long p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        Fp r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Fp fp_powx(long e_pow_p_times, const Fp& m, long p) {
    // x^(p^t) mod m
    Fp x = fp_rem({0, 1}, m, p);
    for (long t = 0; t < e_pow_p_times; ++t) {
        Fp base = x, acc = {1};
        long k = p;
        while (k > 0) {
            if (k & 1) acc = fp_mulmod(acc, base, m, p);
            base = fp_mulmod(base, base, m, p);
            k >>= 1;
        }
        x = acc;
    }
    return x;
}

bool fp_irreducible(const Fp& h, long p) {
    const long n = (long)h.size() - 1;
    if (n <= 1) return true;
    Fp xq = fp_powx(n, h, p);
    Fp diff = xq;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] - 1 + p) % p;
    fp_trim(diff);
    if (!diff.empty()) return false;
    for (long q = 2; q <= n; ++q) {
        if (n % q) continue;
        bool prime = true;
        for (long r = 2; r * r <= q; ++r)
            if (q % r == 0) prime = false;
        if (!prime) continue;
        Fp t = fp_powx(n / q, h, p);
        t.resize(std::max<size_t>(t.size(), 2), 0);
        t[1] = (t[1] - 1 + p) % p;
        fp_trim(t);
        Fp g = fp_gcd(h, t, p);
        if (g.size() > 1) return false;
    }
    return true;
}

// residue field F_q = F_p[x]/kpoly
struct Fq {
    long p;
    int f;
    std::vector<long> kp;
    std::vector<long> mul(const std::vector<long>& a, const std::vector<long>& b) const {
        std::vector<long> raw(2 * f - 1, 0);
        for (int i = 0; i < f; ++i)
            for (int j = 0; j < f; ++j) raw[i + j] = (raw[i + j] + a[i] * b[j]) % p;
        for (int t = 2 * f - 2; t >= f; --t) {
            long c = raw[t];
            if (!c) continue;
            for (int i = 0; i < f; ++i) raw[t - f + i] = ((raw[t - f + i] - c * kp[i]) % p + p) % p;
            raw[t] = 0;
        }
        raw.resize(f);
        return raw;
    }
    std::vector<long> add(const std::vector<long>& a, const std::vector<long>& b) const {
        std::vector<long> r(f);
        for (int i = 0; i < f; ++i) r[i] = (a[i] + b[i]) % p;
        return r;
    }
    bool zero(const std::vector<long>& a) const {
        for (long x : a)
            if (x) return false;
        return true;
    }
};

Fq residue_field(const Field* F) {
    Fq q{F->p, F->f, {}};
    for (int i = 0; i < F->f; ++i) q.kp.push_back(mpz_fdiv_ui(F->kpoly[i].get_mpz_t(), F->p));
    return q;
}

// ---------------------------------------------------------------- rational polys

using QPoly = std::vector<mpq_class>;

void q_trim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly q_rem(QPoly a, const QPoly& b) {
    q_trim(a);
    const long db = (long)b.size() - 1;
    while ((long)a.size() - 1 >= db && !a.empty()) {
        long k = (long)a.size() - 1 - db;
        mpq_class c = a.back() / b.back();
        for (long j = 0; j <= db; ++j) a[k + j] -= c * b[j];
        a.pop_back();
        q_trim(a);
    }
    return a;
}

long q_gcd_degree(QPoly a, QPoly b) {
    q_trim(a);
    q_trim(b);
    while (!b.empty()) {
        QPoly r = q_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return (long)a.size() - 1;
}

std::string poly_id(long p, const std::vector<mpz_class>& c) {
    std::ostringstream os;
    os << "Q" << p << "[";
    for (long k = (long)c.size() - 1; k >= 0; --k) os << c[k] << (k ? "," : "]");
    return os.str();
}

Scalar from_residue(const Field* F, const std::vector<long>& r) {
    Scalar s(F, INF);
    for (int i = 0; i < F->f; ++i) s.c[i] = r[i];
    return s;
}

std::vector<long> residue_of(const Scalar& s) {
    if (s.is_zero()) return std::vector<long>(s.F->f, 0);
    return s.residue();
}

// f(z) scaled: coefficients c_i * w^(k i), then divided by the minimal valuation
Poly scale_poly(const Poly& f, const Scalar& wk) {
    std::vector<Scalar> v = f.scalars();
    Scalar pw = Scalar::one(f.F);
    for (auto& s : v) {
        s = s * pw;
        pw = pw * wk;
    }
    return Poly::from_scalars(f.F, v);
}

Poly normalize_unit(const Poly& g) {
    long m = g.min_val_e();
    if (m >= INF) return g;
    const Field* F = g.F;
    // divide by uniformizer^m: p^(m/e) times y^(m mod e)
    long q = m / F->e, r = m % F->e;
    if (r < 0) {
        r += F->e;
        --q;
    }
    Poly h = shift_p(g, -q);
    if (r) {
        Scalar yinv = inv(Scalar::uniformizer(F).lifted(h.pr < INF ? h.pr + 4 : default_prec()));
        h = h * pow(yinv, r);
    }
    return h;
}

Scalar newton_lift(const Poly& g, Scalar z, long prec) {
    Poly dg = derivative(g);
    for (int it = 0; it < 200; ++it) {
        Scalar val = eval(g, z);
        if (val.is_zero() || val.val_floor() >= prec) break;
        Scalar step = val / eval(dg, z);
        z = z - step;
    }
    return z;
}

void roots_rec(const Poly& f0, long prec, int depth, std::vector<Scalar>& out) {
    Poly f = f0;
    f.trim();
    if (f.deg() <= 0) return;
    const Field* F = f.F;
    if (depth > 60) fail(Err::PrecisionExhausted, "root isolation did not terminate");
    Fq fq = residue_field(F);
    long q = 1;
    for (int i = 0; i < F->f; ++i) q *= F->p;
    for (auto [slope, len] : newton_polygon(f)) {
        mpq_class v = -slope * F->e;
        if (v.get_den() != 1) continue;
        long k = v.get_num().get_si();
        Scalar w = Scalar::uniformizer(F).lifted(prec + 8);
        Scalar wk = k >= 0 ? pow(w, k) : pow(inv(w), -k);
        Poly g = normalize_unit(scale_poly(f, wk));
        // residue polynomial
        std::vector<std::vector<long>> rp;
        for (long i = 0; i < g.n; ++i) {
            Scalar c = g.coef(i);
            rp.push_back(c.is_zero() || c.val_e() > 0 ? std::vector<long>(F->f, 0) : residue_of(c));
        }
        std::vector<std::vector<long>> found;
        for (long idx = 0; idx < q; ++idx) {
            std::vector<long> z(F->f);
            long t = idx;
            for (int i = 0; i < F->f; ++i) {
                z[i] = t % F->p;
                t /= F->p;
            }
            if (fq.zero(z)) continue;
            std::vector<long> acc(F->f, 0);
            for (long i = (long)rp.size() - 1; i >= 0; --i) acc = fq.add(fq.mul(acc, z), rp[i]);
            if (fq.zero(acc)) found.push_back(z);
        }
        for (const auto& z0r : found) {
            Scalar z0 = from_residue(F, z0r).lifted(prec + 8);
            // simple residue root?
            std::vector<long> acc(F->f, 0);
            for (long i = (long)rp.size() - 1; i >= 1; --i) {
                std::vector<long> ci = rp[i];
                for (auto& x : ci) x = x * i % F->p;
                acc = fq.add(fq.mul(acc, z0r), ci);
            }
            if (!fq.zero(acc)) {
                out.push_back(wk * newton_lift(g, z0, prec + 4));
                continue;
            }
            // z = z0 + w t
            Poly h = taylor_shift(g, z0);
            h = normalize_unit(scale_poly(h, w));
            std::vector<Scalar> sub;
            roots_rec(h, prec, depth + 1, sub);
            for (auto& s : sub) out.push_back(wk * (z0 + w * s));
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- Newton polygon

std::vector<std::pair<mpq_class, long>> newton_polygon(const Poly& f) {
    std::vector<std::pair<long, long>> pts;   // (i, v_e)
    for (long i = 0; i < f.n; ++i) {
        Scalar c = f.coef(i);
        if (c.is_zero()) continue;
        pts.push_back({i, c.val_e()});
    }
    std::vector<std::pair<mpq_class, long>> segs;
    if (pts.size() < 2) return segs;
    size_t cur = 0;
    while (cur + 1 < pts.size()) {
        size_t best = cur + 1;
        mpq_class bs((pts[best].second - pts[cur].second), (pts[best].first - pts[cur].first));
        bs.canonicalize();
        for (size_t j = cur + 2; j < pts.size(); ++j) {
            mpq_class s((pts[j].second - pts[cur].second), (pts[j].first - pts[cur].first));
            s.canonicalize();
            if (s <= bs) {
                bs = s;
                best = j;
            }
        }
        mpq_class slope = bs / f.F->e;
        segs.push_back({slope, pts[best].first - pts[cur].first});
        cur = best;
    }
    return segs;
}

std::vector<Scalar> find_roots(const Poly& f, long prec) {
    std::vector<Scalar> out;
    Poly g = f;
    g.trim();
    // roots at zero
    while (g.deg() > 0 && g.coef(0).is_zero()) {
        out.push_back(Scalar::zero(f.F));
        Poly h(g.F, g.n - 1, g.pr);
        h.ex = g.ex;
        std::copy(g.c.begin() + g.F->d, g.c.end(), h.c.begin());
        g = h;
    }
    roots_rec(g, prec, 0, out);
    for (auto& r : out) r = r.with_prec(prec);
    return out;
}

// ---------------------------------------------------------------- build_field

FieldDescriptor build_field(long p, const std::vector<mpz_class>& poly0) {
    if (p == 2) fail(Err::EvenPrime, "p = 2 is not supported");
    if (p < 2 || mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 30) == 0)
        fail(Err::InvalidInput, "p must be an odd prime");
    std::vector<mpz_class> poly = poly0;
    while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
    const long n = (long)poly.size() - 1;
    if (n < 1) fail(Err::InvalidInput, "defining polynomial must have degree >= 1");
    if (poly.back() != 1) fail(Err::InvalidInput, "defining polynomial must be monic");

    FieldDescriptor D;
    D.p = p;
    D.defining_poly = poly;
    if (n == 1) {
        D.F = prime_field(p);
        D.uniformizer = Scalar::uniformizer(D.F);
        D.generator = Scalar::integer(D.F, -poly[0]);
        return D;
    }
    {
        QPoly a(poly.begin(), poly.end()), da;
        for (long i = 1; i <= n; ++i) da.push_back(mpq_class(poly[i] * i));
        if (q_gcd_degree(a, da) > 0) fail(Err::NonSquarefreePolynomial, "defining polynomial is not squarefree");
    }
    // Newton polygon on integer valuations
    const Field* Qp = prime_field(p);
    Poly P = Poly::from_ints(Qp, poly);
    auto segs = newton_polygon(P);
    if (segs.size() != 1) fail(Err::Unsupported, "defining polynomial has more than one Newton slope");
    mpq_class s = -segs[0].first;   // root valuation
    const long a = s.get_num().get_si(), d = s.get_den().get_si();
    if (d == 1) {
        // x = p^a y
        std::vector<mpz_class> h(n + 1);
        for (long i = 0; i <= n; ++i) {
            mpz_class c = poly[i];
            long shift = a * (n - i);
            if (shift >= 0) {
                mpz_class pp = Qp->ppow(shift);
                if (!mpz_divisible_p(c.get_mpz_t(), pp.get_mpz_t()))
                    fail(Err::Unsupported, "rescaled polynomial is not integral");
                mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pp.get_mpz_t());
            } else
                c *= Qp->ppow(-shift);
            h[i] = c;
        }
        Fp hr;
        for (auto& c : h) hr.push_back(mpz_fdiv_ui(c.get_mpz_t(), p));
        if (!fp_irreducible(hr, p))
            fail(Err::Unsupported, "reduction is reducible: only unramified or totally ramified fields are built");
        D.F = make_field(p, h, {{0}, {1}}, poly_id(p, poly));
        D.e = 1;
        D.f = (int)n;
        D.uniformizer = Scalar::uniformizer(D.F);
        D.generator = shift_p(Scalar::basis(D.F, 1, 0), a);
        return D;
    }
    if (d == n && ((a % n) + n) % n == 1) {
        long qq = (a - 1) / n;
        if (a < 1) qq = -((1 - a + n - 1) / n);
        std::vector<std::vector<mpz_class>> eis(n + 1);
        for (long i = 0; i <= n; ++i) {
            mpz_class c = poly[i];
            long shift = qq * (n - i);
            if (shift >= 0) {
                mpz_class pp = Qp->ppow(shift);
                if (!mpz_divisible_p(c.get_mpz_t(), pp.get_mpz_t()))
                    fail(Err::Unsupported, "rescaled polynomial is not integral");
                mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pp.get_mpz_t());
            } else
                c *= Qp->ppow(-shift);
            eis[i] = {c};
        }
        for (long i = 0; i < n; ++i)
            if (vp(eis[i][0], p) < 1) fail(Err::Unsupported, "rescaled polynomial is not Eisenstein");
        if (vp(eis[0][0], p) != 1) fail(Err::Unsupported, "rescaled polynomial is not Eisenstein");
        D.F = make_field(p, {0, 1}, eis, poly_id(p, poly));
        D.e = (int)n;
        D.f = 1;
        D.uniformizer = Scalar::uniformizer(D.F);
        D.generator = shift_p(Scalar::basis(D.F, 0, 1), qq);
        return D;
    }
    fail(Err::Unsupported, "ramified extension whose generator is not a uniformizer up to p-powers");
}

// ---------------------------------------------------------------- Hecke roots

HeckeRoots hecke_roots(const Scalar& ap0, const Scalar& eps0, long k, const FieldDescriptor& E, long prec) {
    const Field* F = E.F;
    Scalar ap = embed_prime(F, ap0), eps = embed_prime(F, eps0);
    if (!ap.is_zero() && ap.val_e() <= 0) fail(Err::OrdinaryForm, "a_p is a unit: the form is ordinary");
    if (eps.is_zero() || eps.val_e() != 0) fail(Err::NotAUnit, "eps(p) must be a unit");
    Scalar c0 = eps * Scalar::integer(F, F->ppow(k + 1));
    Scalar disc = ap * ap - c0 * 4;
    if (disc.is_zero()) fail(Err::EqualRoots, "Hecke polynomial has a repeated root");
    Poly h = Poly::from_scalars(F, {c0, -ap, Scalar::one(F)});
    auto r = find_roots(h, prec);
    if (r.size() < 2) fail(Err::RootsNotInField, "Hecke polynomial does not split over " + F->id);
    std::sort(r.begin(), r.end(), [](const Scalar& a, const Scalar& b) {
        if (a.val_e() != b.val_e()) return a.val_e() < b.val_e();
        Scalar x = a, y = b;
        x.normalize();
        y.normalize();
        for (int i = 0; i < (int)x.c.size(); ++i) {
            mpz_class xa = x.c[i] % x.F->ppow(4), ya = y.c[i] % y.F->ppow(4);
            if (xa < 0) xa += x.F->ppow(4);
            if (ya < 0) ya += y.F->ppow(4);
            if (xa != ya) return xa < ya;
        }
        return false;
    });
    if (same(r[0], r[1])) fail(Err::EqualRoots, "roots coincide at working precision");
    return {r[0], r[1]};
}

FieldDescriptor hecke_splitting_field(long p, long kf, const mpz_class& apf, const mpz_class& epsf, long kg,
                                      const mpz_class& apg, const mpz_class& epsg, long prec) {
    (void)prec;
    bool need_unram = false;
    std::vector<mpz_class> ram;
    mpz_class pp = p;
    auto consider = [&](long k, const mpz_class& a, const mpz_class& eps) {
        mpz_class pk;
        mpz_pow_ui(pk.get_mpz_t(), pp.get_mpz_t(), k + 1);
        mpz_class D = a * a - 4 * eps * pk;
        if (D == 0) fail(Err::EqualRoots, "Hecke polynomial has a repeated root");
        mpz_class D0;
        long v = (long)mpz_remove(D0.get_mpz_t(), D.get_mpz_t(), pp.get_mpz_t());
        if (v % 2)
            ram.push_back(D0);
        else if (mpz_legendre(D0.get_mpz_t(), pp.get_mpz_t()) == -1)
            need_unram = true;
    };
    consider(kf, apf, epsf);
    consider(kg, apg, epsg);
    if (ram.size() == 2) {
        mpz_class t = ram[0] * ram[1];
        if (mpz_legendre(t.get_mpz_t(), pp.get_mpz_t()) == -1) need_unram = true;
    }
    const Field* K = unramified_field(p, need_unram ? 2 : 1);
    FieldDescriptor D;
    D.p = p;
    if (ram.empty()) {
        D.F = K;
        D.f = K->f;
        D.e = 1;
        D.defining_poly = K->kpoly;
    } else {
        // smallest delta in the square class of D0 (over K)
        mpz_class delta = ram[0];
        for (long t = 1; t < 4 * p; ++t) {
            bool hit = false;
            for (long sg : {1L, -1L}) {
                mpz_class cand = sg * t;
                if (cand % pp == 0) continue;
                mpz_class prod = cand * ram[0];
                if (need_unram || mpz_legendre(prod.get_mpz_t(), pp.get_mpz_t()) == 1) {
                    delta = cand;
                    hit = true;
                    break;
                }
            }
            if (hit) break;
        }
        std::vector<std::vector<mpz_class>> eis(3, std::vector<mpz_class>(K->f));
        eis[0][0] = -p * delta;
        eis[2][0] = 1;
        std::ostringstream os;
        os << K->id << "(y^2-" << (p * delta) << ")";
        D.F = make_field(p, K->kpoly, eis, os.str());
        D.f = K->f;
        D.e = 2;
        D.defining_poly = {-p * delta, 0, 1};
    }
    D.uniformizer = Scalar::uniformizer(D.F);
    D.generator = D.e > 1 ? Scalar::basis(D.F, 0, 1) : Scalar::basis(D.F, D.f > 1 ? 1 : 0, 0);
    return D;
}

// ---------------------------------------------------------------- Teichmuller, log

Scalar teichmuller(const Scalar& a, long prec) {
    const Field* F = a.F;
    if (a.is_zero() || a.val_e() != 0) fail(Err::NotAUnit, "Teichmuller lift of a non-unit");
    long q = 1;
    for (int i = 0; i < F->f; ++i) q *= F->p;
    Scalar z = from_residue(F, a.residue()).lifted(prec + 4);
    // Newton on z^(q-1) = 1
    Scalar one = Scalar::one(F);
    for (int it = 0; it < 64; ++it) {
        Scalar zq2 = pow(z, q - 2);
        Scalar g = zq2 * z - one;
        if (g.is_zero() || g.val_floor() >= prec + 2) break;
        z = z - g / (zq2 * (q - 1));
    }
    return z.with_prec(prec);
}

mpz_class teichmuller_int(long t, long p, long K) {
    mpz_class m, r, b = t, pp = p, ex;
    mpz_pow_ui(m.get_mpz_t(), pp.get_mpz_t(), K);
    if (mpz_divisible_ui_p(b.get_mpz_t(), p)) fail(Err::NotAUnit, "Teichmuller lift of a non-unit");
    mpz_pow_ui(ex.get_mpz_t(), pp.get_mpz_t(), K);   // a^(p^K) = teich(a) mod p^(K+1)
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), ex.get_mpz_t(), m.get_mpz_t());
    return r;
}

mpz_class zp_log(const mpz_class& a, long p, long K) {
    const mpz_class pp = p;
    const mpz_class x = a - 1;
    const long vx = vp(x, p);
    if (vx < 1) fail(Err::NotAUnit, "log of an element that is not 1 mod p");
    if (vx >= INF) return 0;
    // terms x^k/k with k*vx - v(k) >= K vanish; v(k) <= log_p(k)
    long kmax = 1;
    while (true) {
        long lg = 0;
        for (long t = kmax; t >= p; t /= p) ++lg;
        if (kmax * vx - lg >= K) break;
        ++kmax;
    }
    long extra = 0;
    for (long t = kmax; t >= p; t /= p) ++extra;
    mpz_class mod, modx, res = 0, xk = 1;
    mpz_pow_ui(mod.get_mpz_t(), pp.get_mpz_t(), K);
    mpz_pow_ui(modx.get_mpz_t(), pp.get_mpz_t(), K + extra);
    for (long k = 1; k <= kmax; ++k) {
        xk *= x;
        mpz_fdiv_r(xk.get_mpz_t(), xk.get_mpz_t(), modx.get_mpz_t());
        long vk = 0, kk = k;
        while (kk % p == 0) {
            kk /= p;
            ++vk;
        }
        mpz_class pv, term, ii, ik = kk;
        mpz_pow_ui(pv.get_mpz_t(), pp.get_mpz_t(), vk);
        mpz_divexact(term.get_mpz_t(), xk.get_mpz_t(), pv.get_mpz_t());
        mpz_invert(ii.get_mpz_t(), ik.get_mpz_t(), mod.get_mpz_t());
        term *= ii;
        if (k % 2 == 0)
            res -= term;
        else
            res += term;
    }
    mpz_fdiv_r(res.get_mpz_t(), res.get_mpz_t(), mod.get_mpz_t());
    return res;
}

// ---------------------------------------------------------------- cyclotomic composites

Scalar Composite::embed(const Scalar& a) const {
    if (a.F == C) return a;
    const int f = E->f;
    Scalar acc = Scalar::zero(C, a.pr);
    for (int j = 0; j < E->e; ++j) {
        Scalar kpart(C, INF);
        bool nz = false;
        for (int i = 0; i < f; ++i) {
            kpart.c[i] = a.c[i + f * j];
            if (kpart.c[i] != 0) nz = true;
        }
        if (!nz) continue;
        kpart.ex = a.ex;
        kpart.pr = a.pr;
        acc = acc + (j == 0 ? kpart : kpart * ypow[j]);
    }
    acc.pr = std::min(acc.pr, a.pr);
    acc.reduce();
    return acc;
}

Poly Composite::embed(const Poly& a) const {
    std::vector<Scalar> v;
    for (long k = 0; k < a.n; ++k) v.push_back(embed(a.coef(k)));
    Poly r = Poly::from_scalars(C, v);
    if (a.n == 0) r = Poly(C, 0, a.pr);
    return r;
}

const Composite& composite(const Field* E, int k, long prec) {
    static std::mutex mu;
    static std::deque<Composite> cache;
    std::lock_guard<std::mutex> lk(mu);
    for (const auto& c : cache)
        if (c.E == E && c.k == k) return c;
    Composite X;
    X.E = E;
    X.k = k;
    const long p = E->p;
    if (k == 0) {
        X.C = E;
        X.zeta = Scalar::one(E);
        X.ypow.push_back(Scalar::one(E));
        for (int j = 1; j < E->e; ++j) X.ypow.push_back(pow(Scalar::basis(E, 0, 1), j));
        cache.push_back(X);
        return cache.back();
    }
    // Phi_{p^k}(z+1) = sum_{j<p} (z+1)^(j p^(k-1))
    long pk1 = 1;
    for (int i = 0; i < k - 1; ++i) pk1 *= p;
    const long deg = (p - 1) * pk1;
    std::vector<mpz_class> co(deg + 1, 0);
    for (long j = 0; j < p; ++j) {
        long N = j * pk1;
        mpz_class b = 1;
        for (long t = 0; t <= N; ++t) {
            co[t] += b;
            b = b * (N - t) / (t + 1);
        }
    }
    std::vector<std::vector<mpz_class>> eis(deg + 1, std::vector<mpz_class>(E->f));
    for (long t = 0; t <= deg; ++t) eis[t][0] = co[t];
    std::ostringstream os;
    os << E->id << "(zeta_" << p << "^" << k << ")";
    X.C = make_field(p, E->kpoly, eis, os.str());
    X.zeta = Scalar::one(X.C) + Scalar::basis(X.C, 0, 1);
    X.ypow.push_back(Scalar::one(X.C));
    if (E->e > 1) {
        std::vector<Scalar> g;
        for (int j = 0; j <= E->e; ++j) {
            Scalar s(X.C, INF);
            for (int i = 0; i < E->f; ++i) s.c[i] = E->eis[j][i];
            g.push_back(s);
        }
        auto roots = find_roots(Poly::from_scalars(X.C, g), prec);
        if (roots.empty()) fail(Err::Unsupported, "field does not embed into its cyclotomic composite");
        for (int j = 1; j < E->e; ++j) X.ypow.push_back(pow(roots[0], j));
    }
    cache.push_back(X);
    return cache.back();
}

Scalar root_of_unity(const Field* E, int k, long prec) {
    if (k < 0) fail(Err::InvalidInput, "negative order exponent");
    return composite(E, k, prec).zeta;
}

}  // namespace rs
