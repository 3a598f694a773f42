#include "rs/field.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <sstream>

namespace rs {

namespace {
thread_local long g_default_prec = 120;

constexpr long PW_MAX = 3000;

std::mutex& reg_mutex() {
    static std::mutex m;
    return m;
}
std::deque<Field>& registry() {
    static std::deque<Field> r;
    return r;
}
std::map<long, std::vector<mpz_class>>& pow_tables() {
    static std::map<long, std::vector<mpz_class>> t;
    return t;
}

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
}  // namespace

long default_prec() { return g_default_prec; }
void set_default_prec(long prec) { g_default_prec = prec; }

long vp(const mpz_class& x, long p) {
    if (x == 0) return INF;
    if (mpz_divisible_ui_p(x.get_mpz_t(), p) == 0) return 0;
    mpz_class t, pp = p;
    return (long)mpz_remove(t.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t());
}

mpz_class mod_pow_p(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

// ---------------------------------------------------------------- Field

const mpz_class& Field::ppow(long k) const {
    if (k < 0 || k > PW_MAX) fail(Err::PrecisionExhausted, "p-power exponent out of range: " + std::to_string(k));
    return (*pw_)[k];
}

std::vector<mpz_class> Field::kmul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) const {
    std::vector<mpz_class> raw(2 * f - 1);
    for (int i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < f; ++j) raw[i + j] += a[i] * b[j];
    }
    for (int t = 2 * f - 2; t >= f; --t) {
        if (raw[t] == 0) continue;
        mpz_class lead = raw[t];
        for (int i = 0; i < f; ++i) raw[t - f + i] -= lead * kpoly[i];
        raw[t] = 0;
    }
    raw.resize(f);
    return raw;
}

void Field::mul_raw(const mpz_class* a, const mpz_class* b, mpz_class* out) const {
    for (int j1 = 0; j1 < e; ++j1)
        for (int i1 = 0; i1 < f; ++i1) {
            const mpz_class& x = a[i1 + f * j1];
            if (x == 0) continue;
            for (int j2 = 0; j2 < e; ++j2)
                for (int i2 = 0; i2 < f; ++i2) {
                    const mpz_class& y = b[i2 + f * j2];
                    if (y == 0) continue;
                    mpz_addmul(out[(i1 + i2) + rf * (j1 + j2)].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                }
        }
}

void Field::reduce_raw(const mpz_class* raw, mpz_class* out) const {
    for (int k = 0; k < d; ++k) out[k] = 0;
    const int S = rf * re;
    for (int r = 0; r < S; ++r) {
        if (raw[r] == 0) continue;
        for (const auto& [k, v] : red[r]) {
            if (v == 1)
                out[k] += raw[r];
            else if (v == -1)
                out[k] -= raw[r];
            else
                mpz_addmul(out[k].get_mpz_t(), raw[r].get_mpz_t(), v.get_mpz_t());
        }
    }
}

const Field* make_field(long p, std::vector<mpz_class> kpoly, std::vector<std::vector<mpz_class>> eis,
                        std::string id) {
    if (p == 2) fail(Err::EvenPrime, "p = 2 is not supported");
    std::lock_guard<std::mutex> lk(reg_mutex());
    for (const Field& F : registry())
        if (F.id == id && F.p == p) return &F;

    Field F;
    F.p = p;
    F.f = (int)kpoly.size() - 1;
    F.e = (int)eis.size() - 1;
    F.d = F.f * F.e;
    F.id = id;
    F.kpoly = std::move(kpoly);
    F.eis = std::move(eis);
    for (auto& c : F.eis) c.resize(F.f);
    F.rf = 2 * F.f - 1;
    F.re = 2 * F.e - 1;

    auto& tabs = pow_tables();
    if (!tabs.count(p)) {
        std::vector<mpz_class> t(PW_MAX + 1);
        t[0] = 1;
        for (long k = 1; k <= PW_MAX; ++k) t[k] = t[k - 1] * p;
        tabs[p] = std::move(t);
    }
    F.pw_ = &tabs[p];

    const int f = F.f, e = F.e;
    // x^i mod kpoly
    std::vector<std::vector<mpz_class>> xpow(F.rf, std::vector<mpz_class>(f));
    xpow[0][0] = 1;
    for (int i = 1; i < F.rf; ++i) {
        std::vector<mpz_class> x(f);
        if (f > 1) x[1] = 1;
        else x[0] = -F.kpoly[0];
        xpow[i] = F.kmul(xpow[i - 1], x);
    }
    // y^j as e K-coefficients
    std::vector<std::vector<std::vector<mpz_class>>> ypow(
        F.re, std::vector<std::vector<mpz_class>>(e, std::vector<mpz_class>(f)));
    ypow[0][0][0] = 1;
    for (int j = 1; j < F.re; ++j) {
        auto& prev = ypow[j - 1];
        auto& cur = ypow[j];
        // multiply by y: shift, then fold y^e
        std::vector<mpz_class> top = prev[e - 1];
        for (int k = e - 1; k >= 1; --k) cur[k] = prev[k - 1];
        cur[0] = std::vector<mpz_class>(f);
        for (int k = 0; k < e; ++k) {
            auto t = F.kmul(top, F.eis[k]);
            for (int i = 0; i < f; ++i) cur[k][i] -= t[i];
        }
    }
    F.red.assign(F.rf * F.re, {});
    for (int j = 0; j < F.re; ++j)
        for (int i = 0; i < F.rf; ++i) {
            auto& row = F.red[i + F.rf * j];
            for (int k = 0; k < e; ++k) {
                auto t = F.kmul(xpow[i], ypow[j][k]);
                for (int ii = 0; ii < f; ++ii)
                    if (t[ii] != 0) row.push_back({ii + f * k, t[ii]});
            }
        }
    registry().push_back(std::move(F));
    return &registry().back();
}

const Field* prime_field(long p) { return make_field(p, {0, 1}, {{0}, {1}}, "Q" + std::to_string(p)); }

const Field* unramified_field(long p, int f) {
    if (f == 1) return prime_field(p);
    // smallest monic irreducible polynomial mod p of degree f, by brute force
    std::vector<long> co(f, 0);
    auto irreducible = [&](const std::vector<long>& c) {
        // for f <= 3 it is enough to have no root in F_p
        if (f > 3) fail(Err::Unsupported, "unramified degree > 3");
        for (long x = 0; x < p; ++x) {
            long acc = 1;
            for (int k = f - 1; k >= 0; --k) acc = (acc * x + c[k]) % p;
            if (acc == 0) return false;
        }
        return true;
    };
    long total = 1;
    for (int i = 0; i < f; ++i) total *= p;
    for (long idx = 0; idx < total; ++idx) {
        long t = idx;
        for (int k = 0; k < f; ++k) { co[k] = t % p; t /= p; }
        if (irreducible(co)) {
            std::vector<mpz_class> kp(f + 1);
            for (int k = 0; k < f; ++k) kp[k] = co[k];
            kp[f] = 1;
            std::ostringstream os;
            os << "Q" << p << "^" << f << "[";
            for (int k = f; k >= 0; --k) os << kp[k] << (k ? "," : "]");
            return make_field(p, kp, {{0}, {1}}, os.str());
        }
    }
    fail(Err::Unsupported, "no irreducible polynomial found");
}

// ---------------------------------------------------------------- Scalar

Scalar Scalar::integer(const Field* F, const mpz_class& v, long prec) {
    Scalar s(F, INF);
    s.c[0] = v;
    s.pr = prec;
    s.reduce();
    return s;
}

Scalar Scalar::rational(const Field* F, const mpq_class& q, long prec) {
    mpz_class num = q.get_num(), den = q.get_den();
    if (num == 0) return zero(F, prec);
    long v = vp(num, F->p) - vp(den, F->p);
    mpz_class pp = F->p, t;
    mpz_remove(t.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t());
    num = t;
    mpz_remove(t.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t());
    den = t;
    Scalar s(F, INF);
    s.ex = v;
    if (den == 1 || den == -1) {
        s.c[0] = num * den;
        s.pr = prec;
        s.reduce();
        return s;
    }
    if (prec >= INF) prec = default_prec();
    s.pr = prec;
    long K = prec - v;
    if (K <= 0) return zero(F, prec);
    mpz_class m = F->ppow(K), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    s.c[0] = num * inv;
    s.reduce();
    return s;
}

Scalar Scalar::basis(const Field* F, int i, int j) {
    Scalar s(F, INF);
    s.c[i + F->f * j] = 1;
    return s;
}

Scalar Scalar::uniformizer(const Field* F) {
    if (F->e > 1) return basis(F, 0, 1);
    return integer(F, F->p);
}

long Scalar::val_e() const {
    long best = INF;
    const int f = F->f, e = F->e;
    for (int k = 0; k < F->d; ++k) {
        if (c[k] == 0) continue;
        long v = vp(c[k], F->p) * e + k / f;
        best = std::min(best, v);
    }
    if (best >= INF) return INF;
    return best + ex * e;
}

mpq_class Scalar::val() const {
    long v = val_e();
    if (v >= INF) return mpq_class(INF);
    mpq_class q(v, F->e);
    q.canonicalize();
    return q;
}

long Scalar::val_floor() const {
    long v = val_e();
    if (v >= INF) return INF;
    return floor_div(v, F->e);
}

bool Scalar::is_exact_zero() const {
    if (!exact()) return false;
    for (const auto& x : c)
        if (x != 0) return false;
    return true;
}

void Scalar::reduce() {
    if (ex < 0) normalize();
    if (exact()) return;
    long K = pr - ex;
    if (K <= 0) {
        for (auto& x : c) x = 0;
        ex = pr;
        return;
    }
    const mpz_class& m = F->ppow(K);
    for (auto& x : c)
        if (x != 0) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
}

void Scalar::normalize() {
    long v = INF;
    for (const auto& x : c)
        if (x != 0) v = std::min(v, vp(x, F->p));
    if (v >= INF || v == 0) return;
    const mpz_class& m = F->ppow(v);
    for (auto& x : c)
        if (x != 0) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    ex += v;
}

Scalar Scalar::with_prec(long prec) const {
    Scalar s = *this;
    if (prec < s.pr) {
        s.pr = prec;
        s.reduce();
    }
    return s;
}

Scalar Scalar::lifted(long prec) const {
    Scalar s = *this;
    if (s.exact()) {
        s.pr = prec;
        s.reduce();
    }
    return s;
}

std::vector<long> Scalar::residue() const {
    std::vector<long> r(F->f, 0);
    if (ex > 0) return r;
    for (int i = 0; i < F->f; ++i) {
        mpz_class x = c[i];
        if (ex < 0) {
            if (!mpz_divisible_p(x.get_mpz_t(), F->ppow(-ex).get_mpz_t()))
                fail(Err::NotAUnit, "residue of a non-integral element");
            mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), F->ppow(-ex).get_mpz_t());
        }
        r[i] = mpz_fdiv_ui(x.get_mpz_t(), F->p);
    }
    return r;
}

bool Scalar::in_prime_field() const {
    for (int k = 1; k < F->d; ++k)
        if (c[k] != 0) return false;
    return true;
}

mpz_class Scalar::as_integer_mod(long N) const {
    mpz_class x = c[0];
    if (ex >= 0)
        x *= F->ppow(ex);
    else {
        if (!mpz_divisible_p(x.get_mpz_t(), F->ppow(-ex).get_mpz_t()))
            fail(Err::NotZpUnit, "element is not integral");
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), F->ppow(-ex).get_mpz_t());
    }
    return mod_pow_p(x, F->ppow(N));
}

std::string Scalar::str() const {
    std::ostringstream os;
    os << "p^" << ex << "*(";
    for (int k = 0; k < F->d; ++k) os << (k ? "," : "") << c[k];
    os << ")";
    if (!exact()) os << "+O(p^" << pr << ")";
    return os.str();
}

namespace {
// add with alignment; sign = +1 or -1
Scalar addsub(const Scalar& a, const Scalar& b, int sign) {
    Scalar r(a.F, INF);
    r.pr = std::min(a.pr, b.pr);
    r.ex = std::min(a.ex, b.ex);
    const int d = a.F->d;
    for (int k = 0; k < d; ++k) {
        mpz_class x = a.c[k], y = b.c[k];
        if (a.ex > r.ex && x != 0) x *= a.F->ppow(a.ex - r.ex);
        if (b.ex > r.ex && y != 0) y *= a.F->ppow(b.ex - r.ex);
        if (sign > 0) r.c[k] = x + y; else r.c[k] = x - y;
    }
    r.reduce();
    return r;
}

long lower_val(const Scalar& a) {
    long v = a.val_floor();
    if (v >= INF) return a.pr;
    return v;
}
}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) { return addsub(a, b, 1); }
Scalar operator-(const Scalar& a, const Scalar& b) { return addsub(a, b, -1); }

Scalar operator-(const Scalar& a) {
    Scalar r = a;
    for (auto& x : r.c) x = -x;
    r.reduce();
    return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    const Field* F = a.F;
    Scalar r(F, INF);
    r.ex = a.ex + b.ex;
    r.pr = std::min(sat_add(a.pr, lower_val(b)), sat_add(b.pr, lower_val(a)));
    if (F->d == 1) {
        r.c[0] = a.c[0] * b.c[0];
    } else {
        std::vector<mpz_class> raw(F->rf * F->re);
        F->mul_raw(a.c.data(), b.c.data(), raw.data());
        F->reduce_raw(raw.data(), r.c.data());
    }
    r.reduce();
    return r;
}

Scalar operator*(const Scalar& a, long k) {
    Scalar r = a;
    for (auto& x : r.c) x *= k;
    if (!r.exact()) r.pr = sat_add(r.pr, vp(mpz_class(k), a.F->p));
    r.reduce();
    return r;
}

Scalar shift_p(const Scalar& a, long k) {
    Scalar r = a;
    r.ex += k;
    r.pr = sat_add(r.pr, k);
    return r;
}

namespace {
// Multiply mantissa vectors modulo p^K.
std::vector<mpz_class> vmul(const Field* F, const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                            const mpz_class& mod) {
    std::vector<mpz_class> out(F->d);
    if (F->d == 1) {
        out[0] = a[0] * b[0];
    } else {
        std::vector<mpz_class> raw(F->rf * F->re);
        F->mul_raw(a.data(), b.data(), raw.data());
        F->reduce_raw(raw.data(), out.data());
    }
    for (auto& x : out) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    return out;
}

// inverse of the residue (K-part of coordinate 0 modulo p) in F_q, as K-vector
std::vector<mpz_class> residue_inverse(const Field* F, const std::vector<mpz_class>& w) {
    const int f = F->f;
    std::vector<mpz_class> r(f);
    for (int i = 0; i < f; ++i) r[i] = mod_pow_p(w[i], F->p);
    // r^(q-2) in F_q
    mpz_class q = F->ppow(f);
    mpz_class ex = q - 2;
    std::vector<mpz_class> acc(f), base = r;
    acc[0] = 1;
    mpz_class pp = F->p;
    while (ex > 0) {
        if (mpz_odd_p(ex.get_mpz_t())) {
            acc = F->kmul(acc, base);
            for (auto& x : acc) x = mod_pow_p(x, pp);
        }
        base = F->kmul(base, base);
        for (auto& x : base) x = mod_pow_p(x, pp);
        ex >>= 1;
    }
    std::vector<mpz_class> out(F->d);
    for (int i = 0; i < f; ++i) out[i] = acc[i];
    return out;
}
}  // namespace

Scalar inv(const Scalar& a0) {
    const Field* F = a0.F;
    Scalar m = a0;
    m.normalize();
    long r = 0;
    {
        Scalar t = m;
        t.ex = 0;
        r = t.val_e();
    }
    if (r >= INF) fail(Err::PrecisionExhausted, "inverse of an element that is zero at precision");
    const long ex = m.ex;
    const int e = F->e;
    // exact shortcut: +-1 in the prime field
    if (a0.exact() && m.in_prime_field() && (m.c[0] == 1 || m.c[0] == -1)) {
        Scalar s(F, INF);
        s.c[0] = m.c[0];
        s.ex = -ex;
        return s;
    }
    // target absolute precision of the result
    long T;
    if (a0.exact())
        T = default_prec();
    else {
        // floor(pr - 2 v), v = ex + r/e
        T = a0.pr - 2 * ex - (2 * r + e - 1) / e;
    }
    const long K = std::max<long>(T + ex + r + 2, 2);
    const mpz_class& mod = F->ppow(K + r);
    std::vector<mpz_class> mm = m.c;
    for (auto& x : mm) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    // h = -(y^(e-1) + g_(e-1) y^(e-2) + ... + g_1) so that y^-1 = h / g_0
    std::vector<mpz_class> h(F->d);
    if (e > 1) {
        for (int j = 0; j < e; ++j)
            for (int i = 0; i < F->f; ++i) h[i + F->f * j] = -F->eis[j + 1][i];
    }
    std::vector<mpz_class> hr(F->d);
    hr[0] = 1;
    for (long k = 0; k < r; ++k) hr = vmul(F, hr, h, mod);
    std::vector<mpz_class> w = vmul(F, mm, hr, mod);
    for (auto& x : w) {
        if (!mpz_divisible_p(x.get_mpz_t(), F->ppow(r).get_mpz_t()))
            fail(Err::PrecisionExhausted, "inverse: insufficient precision in unit extraction");
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), F->ppow(r).get_mpz_t());
    }
    // Newton: z <- z (2 - w z)
    std::vector<mpz_class> z = residue_inverse(F, w);
    // the residue inverse is only correct modulo y; reach modulo p first
    for (int s = 1; s < e; s *= 2) {
        const mpz_class& mk = F->ppow(1);
        auto wz = vmul(F, w, z, mk);
        for (auto& x : wz) x = -x;
        wz[0] += 2;
        z = vmul(F, z, wz, mk);
    }
    long have = 1;
    while (have < K) {
        have = std::min(2 * have, K);
        const mpz_class& mk = F->ppow(have);
        auto wz = vmul(F, w, z, mk);
        for (auto& x : wz) x = -x;
        wz[0] += 2;
        z = vmul(F, z, wz, mk);
    }
    auto res = vmul(F, hr, z, F->ppow(K));
    Scalar s(F, INF);
    s.c = res;
    s.ex = -ex - r;
    s.pr = T;
    s.reduce();
    return s;
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * inv(b); }

Scalar pow(const Scalar& a, long k) {
    if (k < 0) return inv(pow(a, -k));
    Scalar r = Scalar::one(a.F), base = a;
    while (k > 0) {
        if (k & 1) r = r * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return r;
}

bool same(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }

Scalar embed_prime(const Field* F, const Scalar& a) {
    if (a.F == F) return a;
    if (a.F->d != 1) fail(Err::InvalidInput, "embed_prime expects a Q_p element");
    Scalar s(F, INF);
    s.c[0] = a.c[0];
    s.ex = a.ex;
    s.pr = a.pr;
    return s;
}

}  // namespace rs
