#include <algorithm>
#include <cstring>

#include "rs/field.hpp"

namespace rs {

// ---------------------------------------------------------------- basics

Poly Poly::from_scalars(const Field* F, const std::vector<Scalar>& v) {
    Poly r(F, (long)v.size(), INF);
    long ex = INF, pr = INF;
    for (const auto& s : v) {
        pr = std::min(pr, s.pr);
        bool nz = false;
        for (const auto& x : s.c)
            if (x != 0) nz = true;
        if (nz) ex = std::min(ex, s.ex);
    }
    if (ex >= INF) ex = pr < INF ? std::min<long>(0, pr) : 0;
    r.ex = ex;
    r.pr = pr;
    const int d = F->d;
    for (size_t k = 0; k < v.size(); ++k) {
        const Scalar& s = v[k];
        for (int i = 0; i < d; ++i) {
            if (s.c[i] == 0) continue;
            if (s.ex > ex)
                r.c[k * d + i] = s.c[i] * F->ppow(s.ex - ex);
            else
                r.c[k * d + i] = s.c[i];
        }
    }
    r.reduce();
    return r;
}

Poly Poly::monomial(const Field* F, long k, const Scalar& a) {
    std::vector<Scalar> v(k + 1, Scalar::zero(F));
    v[k] = a;
    return from_scalars(F, v);
}

Poly Poly::from_ints(const Field* F, const std::vector<mpz_class>& v) {
    Poly r(F, (long)v.size(), INF);
    for (size_t k = 0; k < v.size(); ++k) r.c[k * F->d] = v[k];
    return r;
}

Scalar Poly::coef(long k) const {
    Scalar s(F, INF);
    s.ex = ex;
    s.pr = pr;
    if (k < n) std::copy(c.begin() + k * F->d, c.begin() + (k + 1) * F->d, s.c.begin());
    return s;
}

void Poly::align_ex(long new_ex) {
    if (new_ex >= ex) return;
    const mpz_class& m = F->ppow(ex - new_ex);
    for (auto& x : c)
        if (x != 0) x *= m;
    ex = new_ex;
}

void Poly::set(long k, const Scalar& a) {
    if (k >= n) resize(k + 1);
    bool nz = false;
    for (const auto& x : a.c)
        if (x != 0) nz = true;
    if (nz && a.ex < ex) align_ex(a.ex);
    const int d = F->d;
    for (int i = 0; i < d; ++i) {
        if (a.c[i] == 0) {
            c[k * d + i] = 0;
            continue;
        }
        c[k * d + i] = a.c[i];
        if (a.ex > ex) c[k * d + i] *= F->ppow(a.ex - ex);
    }
    if (a.pr < pr) {
        pr = a.pr;
        reduce();
    } else if (!exact()) {
        long K = pr - ex;
        if (K > 0)
            for (int i = 0; i < d; ++i)
                mpz_fdiv_r(c[k * d + i].get_mpz_t(), c[k * d + i].get_mpz_t(), F->ppow(K).get_mpz_t());
    }
}

bool Poly::mant_zero(long k) const {
    const int d = F->d;
    for (int i = 0; i < d; ++i)
        if (c[k * d + i] != 0) return false;
    return true;
}

long Poly::deg() const {
    for (long k = n - 1; k >= 0; --k)
        if (!mant_zero(k)) return k;
    return -1;
}

void Poly::trim() { resize(std::max<long>(deg() + 1, 0)); }

void Poly::resize(long m) {
    c.resize(m * F->d);
    n = m;
}

void Poly::reduce() {
    if (ex < 0) {
        // pull common p-powers out of the mantissas
        long v = INF;
        for (const auto& x : c) {
            if (x == 0) continue;
            v = std::min(v, vp(x, F->p));
            if (v == 0) break;
        }
        if (v > 0 && v < INF) {
            v = std::min(v, -ex);
            const mpz_class& m = F->ppow(v);
            for (auto& x : c)
                if (x != 0) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
            ex += v;
        }
    }
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

long Poly::min_val_e() const {
    long best = INF;
    const int f = F->f, e = F->e, d = F->d;
    for (long k = 0; k < n; ++k)
        for (int i = 0; i < d; ++i) {
            const mpz_class& x = c[k * d + i];
            if (x == 0) continue;
            long v = (mpz_divisible_ui_p(x.get_mpz_t(), F->p) ? vp(x, F->p) : 0) * e + i / f;
            if (v < best) best = v;
        }
    if (best >= INF) return INF;
    return best + ex * e;
}

long Poly::min_val_floor() const {
    long v = min_val_e();
    if (v >= INF) return INF;
    long e = F->e;
    long q = v / e;
    if (v % e != 0 && v < 0) --q;
    return q;
}

Poly Poly::with_prec(long prec) const {
    Poly r = *this;
    if (prec < r.pr) {
        r.pr = prec;
        r.reduce();
    }
    return r;
}

std::vector<Scalar> Poly::scalars() const {
    std::vector<Scalar> v;
    v.reserve(n);
    for (long k = 0; k < n; ++k) v.push_back(coef(k));
    return v;
}

// ---------------------------------------------------------------- ring ops

namespace {
Poly addsub(const Poly& a, const Poly& b, int sign) {
    const Field* F = a.F;
    Poly r(F, std::max(a.n, b.n), INF);
    r.pr = std::min(a.pr, b.pr);
    r.ex = std::min(a.ex, b.ex);
    const int d = F->d;
    mpz_class ma = a.ex > r.ex ? F->ppow(a.ex - r.ex) : mpz_class(1);
    mpz_class mb = b.ex > r.ex ? F->ppow(b.ex - r.ex) : mpz_class(1);
    for (long k = 0; k < r.n * d; ++k) {
        if (k < a.n * d && a.c[k] != 0) {
            if (ma == 1) r.c[k] = a.c[k];
            else r.c[k] = a.c[k] * ma;
        }
        if (k < b.n * d && b.c[k] != 0) {
            if (sign > 0) {
                if (mb == 1) r.c[k] += b.c[k];
                else mpz_addmul(r.c[k].get_mpz_t(), b.c[k].get_mpz_t(), mb.get_mpz_t());
            } else {
                if (mb == 1) r.c[k] -= b.c[k];
                else mpz_submul(r.c[k].get_mpz_t(), b.c[k].get_mpz_t(), mb.get_mpz_t());
            }
        }
    }
    r.reduce();
    return r;
}

long lower_val(const Poly& a) {
    long v = a.min_val_floor();
    if (v >= INF) return a.pr;
    return v;
}

size_t max_bits(const Poly& a) {
    size_t b = 1;
    for (const auto& x : a.c)
        if (x != 0) b = std::max(b, mpz_sizeinbase(x.get_mpz_t(), 2));
    return b;
}

void schoolbook(const Poly& a, const Poly& b, Poly& r) {
    const Field* F = a.F;
    const int d = F->d;
    if (d == 1) {
        for (long i = 0; i < a.n; ++i) {
            if (a.c[i] == 0) continue;
            for (long j = 0; j < b.n; ++j)
                if (b.c[j] != 0) mpz_addmul(r.c[i + j].get_mpz_t(), a.c[i].get_mpz_t(), b.c[j].get_mpz_t());
        }
        return;
    }
    const int S = F->rf * F->re;
    std::vector<mpz_class> raw((a.n + b.n - 1) * S);
    for (long i = 0; i < a.n; ++i) {
        if (a.mant_zero(i)) continue;
        for (long j = 0; j < b.n; ++j) {
            if (b.mant_zero(j)) continue;
            F->mul_raw(&a.c[i * d], &b.c[j * d], &raw[(i + j) * S]);
        }
    }
    for (long k = 0; k < a.n + b.n - 1; ++k) F->reduce_raw(&raw[k * S], &r.c[k * d]);
}

// Kronecker substitution: pack (t, x, y) into one integer.
void kronecker(const Poly& a, const Poly& b, Poly& r) {
    const Field* F = a.F;
    const int f = F->f, e = F->e, d = F->d;
    const int rf = F->rf, re = F->re, S = rf * re;
    size_t need = max_bits(a) + max_bits(b) + 2;
    long terms = std::min(a.n, b.n) * (long)d;
    while (terms > 0) {
        ++need;
        terms >>= 1;
    }
    const long L = (long)((need + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS);   // limbs per slot

    auto pack = [&](const Poly& x, mpz_class& out) {
        const long slots = x.n * S;
        std::vector<mp_limb_t> pos(slots * L, 0), neg;
        bool any_neg = false;
        for (long k = 0; k < x.n; ++k)
            for (int j = 0; j < e; ++j)
                for (int i = 0; i < f; ++i) {
                    const mpz_class& v = x.c[k * d + i + f * j];
                    if (v == 0) continue;
                    long slot = (k * rf + i) * re + j;
                    mp_limb_t* dst;
                    if (v > 0)
                        dst = &pos[slot * L];
                    else {
                        if (!any_neg) {
                            neg.assign(slots * L, 0);
                            any_neg = true;
                        }
                        dst = &neg[slot * L];
                    }
                    size_t cnt = 0;
                    mpz_export(dst, &cnt, -1, sizeof(mp_limb_t), 0, 0, v.get_mpz_t());
                }
        mpz_t t;
        mpz_roinit_n(t, pos.data(), slots * L);
        out = mpz_class(t);
        if (any_neg) {
            mpz_t u;
            mpz_roinit_n(u, neg.data(), slots * L);
            out -= mpz_class(u);
        }
    };
    mpz_class A, B, C;
    pack(a, A);
    pack(b, B);
    mpz_mul(C.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());

    const long nr = a.n + b.n - 1;
    const long slots = nr * S;
    {
        std::vector<mp_limb_t> off(slots * L, 0);
        const mp_limb_t top = (mp_limb_t)1 << (GMP_NUMB_BITS - 1);
        for (long s = 0; s < slots; ++s) off[s * L + L - 1] = top;
        mpz_t o;
        mpz_roinit_n(o, off.data(), slots * L);
        C += mpz_class(o);
    }
    const mp_limb_t* lp = mpz_limbs_read(C.get_mpz_t());
    const long have = (long)mpz_size(C.get_mpz_t());
    std::vector<mp_limb_t> buf(L);
    mpz_class half;
    mpz_setbit(half.get_mpz_t(), L * GMP_NUMB_BITS - 1);
    std::vector<mpz_class> raw(S);
    for (long k = 0; k < nr; ++k) {
        for (int q = 0; q < S; ++q) {
            long slot = k * S + q;
            for (long w = 0; w < L; ++w) {
                long idx = slot * L + w;
                buf[w] = idx < have ? lp[idx] : 0;
            }
            mpz_t t;
            mpz_roinit_n(t, buf.data(), L);
            // slot order is i*re + j, the reduction table wants i + rf*j
            mpz_sub(raw[(q / re) + rf * (q % re)].get_mpz_t(), t, half.get_mpz_t());
        }
        if (d == 1)
            r.c[k] = raw[0];
        else
            F->reduce_raw(raw.data(), &r.c[k * d]);
    }
}
}  // namespace

Poly operator+(const Poly& a, const Poly& b) { return addsub(a, b, 1); }
Poly operator-(const Poly& a, const Poly& b) { return addsub(a, b, -1); }
Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& x : r.c) x = -x;
    r.reduce();
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    const Field* F = a.F;
    if (a.n == 0 || b.n == 0) return Poly(F, 0, std::min(a.pr, b.pr));
    Poly r(F, a.n + b.n - 1, INF);
    r.ex = a.ex + b.ex;
    r.pr = std::min(sat_add(a.pr, lower_val(b)), sat_add(b.pr, lower_val(a)));
    long small = std::min(a.n, b.n);
    if (small <= 6 || F->d > 12)
        schoolbook(a, b, r);
    else
        kronecker(a, b, r);
    r.reduce();
    return r;
}

Poly operator*(const Poly& a, const Scalar& s) {
    const Field* F = a.F;
    Poly r(F, a.n, INF);
    r.ex = a.ex + s.ex;
    long vs = s.val_floor();
    if (vs >= INF) vs = s.pr;
    long va = lower_val(a);
    r.pr = std::min(sat_add(a.pr, vs), sat_add(s.pr, va));
    const int d = F->d;
    if (d == 1) {
        for (long k = 0; k < a.n; ++k)
            if (a.c[k] != 0) r.c[k] = a.c[k] * s.c[0];
    } else {
        std::vector<mpz_class> raw(F->rf * F->re);
        for (long k = 0; k < a.n; ++k) {
            if (a.mant_zero(k)) continue;
            for (auto& x : raw) x = 0;
            F->mul_raw(&a.c[k * d], s.c.data(), raw.data());
            F->reduce_raw(raw.data(), &r.c[k * d]);
        }
    }
    r.reduce();
    return r;
}

Poly mul_trunc(const Poly& a, const Poly& b, long n) {
    Poly x = a, y = b;
    if (x.n > n) x.resize(n);
    if (y.n > n) y.resize(n);
    Poly r = x * y;
    if (r.n > n) r.resize(n);
    return r;
}

// ---------------------------------------------------------------- division

void divrem(const Poly& a, const Poly& m0, Poly* q, Poly* r) {
    const Field* F = a.F;
    const int d = F->d;
    Poly m = m0;
    m.trim();
    const long dm = m.n - 1;
    if (dm < 0) fail(Err::InvalidInput, "division by zero polynomial");
    // bring m to exponent 0 with integral mantissas
    if (m.ex > 0) m.align_ex(0);
    if (m.ex < 0) {
        const mpz_class& s = F->ppow(-m.ex);
        for (auto& x : m.c) {
            if (x == 0) continue;
            if (!mpz_divisible_p(x.get_mpz_t(), s.get_mpz_t()))
                fail(Err::InvalidInput, "divisor is not integral");
            mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
        }
        m.ex = 0;
    }
    if (m.c[dm * d] != 1) fail(Err::InvalidInput, "divisor is not monic");
    for (int i = 1; i < d; ++i)
        if (m.c[dm * d + i] != 0) fail(Err::InvalidInput, "divisor is not monic");

    std::vector<long> nz;
    for (long j = 0; j < dm; ++j)
        if (!m.mant_zero(j)) nz.push_back(j);

    Poly rr = a;
    long prc = rr.pr;
    if (!m.exact()) prc = std::min(prc, sat_add(m.pr, lower_val(a)));
    const long na = rr.n;
    Poly qq(F, std::max<long>(na - dm, 0), INF);
    qq.ex = rr.ex;
    const bool fin = prc < INF;
    const long K = fin ? prc - rr.ex : 0;
    const mpz_class* mod = (fin && K > 0) ? &F->ppow(K) : nullptr;
    std::vector<mpz_class> raw(F->rf * F->re), prod(d);
    for (long k = na - 1; k >= dm; --k) {
        mpz_class* lead = &rr.c[k * d];
        bool zero = true;
        for (int i = 0; i < d; ++i) {
            if (mod) mpz_fdiv_r(lead[i].get_mpz_t(), lead[i].get_mpz_t(), mod->get_mpz_t());
            if (lead[i] != 0) zero = false;
        }
        if (zero) continue;
        const long base = k - dm;
        for (int i = 0; i < d; ++i) qq.c[base * d + i] = lead[i];
        for (long j : nz) {
            mpz_class* dst = &rr.c[(base + j) * d];
            const mpz_class* mj = &m.c[j * d];
            if (d == 1) {
                if (mj[0] == 1)
                    dst[0] -= lead[0];
                else if (mj[0] == -1)
                    dst[0] += lead[0];
                else
                    mpz_submul(dst[0].get_mpz_t(), lead[0].get_mpz_t(), mj[0].get_mpz_t());
            } else {
                for (auto& x : raw) x = 0;
                F->mul_raw(lead, mj, raw.data());
                F->reduce_raw(raw.data(), prod.data());
                for (int i = 0; i < d; ++i) dst[i] -= prod[i];
            }
        }
        for (int i = 0; i < d; ++i) lead[i] = 0;
    }
    rr.resize(std::min(na, dm));
    rr.pr = prc;
    rr.reduce();
    qq.pr = prc;
    qq.reduce();
    if (q) *q = std::move(qq);
    if (r) *r = std::move(rr);
}

Poly rem(const Poly& a, const Poly& m) {
    Poly r;
    divrem(a, m, nullptr, &r);
    return r;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return rem(a * b, m); }

Poly quo_exact(const Poly& a, const Poly& m, long* rem_val) {
    Poly q, r;
    divrem(a, m, &q, &r);
    if (rem_val) *rem_val = r.min_val_floor();
    return q;
}

Scalar eval(const Poly& a, const Scalar& x) {
    Scalar acc = Scalar::zero(a.F, INF);
    for (long k = a.n - 1; k >= 0; --k) acc = acc * x + a.coef(k);
    if (a.n == 0) acc = Scalar::zero(a.F, a.pr);
    return acc;
}

Poly derivative(const Poly& a) {
    if (a.n <= 1) return Poly(a.F, 0, a.pr);
    Poly r(a.F, a.n - 1, INF);
    r.ex = a.ex;
    r.pr = a.pr;
    const int d = a.F->d;
    for (long k = 1; k < a.n; ++k)
        for (int i = 0; i < d; ++i) r.c[(k - 1) * d + i] = a.c[k * d + i] * k;
    r.reduce();
    return r;
}

Poly shift_p(const Poly& a, long k) {
    Poly r = a;
    r.ex += k;
    r.pr = sat_add(r.pr, k);
    return r;
}

Poly subst_pow(const Poly& a, long k) {
    if (a.n == 0) return a;
    Poly r(a.F, (a.n - 1) * k + 1, INF);
    r.ex = a.ex;
    r.pr = a.pr;
    const int d = a.F->d;
    for (long j = 0; j < a.n; ++j)
        for (int i = 0; i < d; ++i) r.c[j * k * d + i] = a.c[j * d + i];
    return r;
}

Poly taylor_shift(const Poly& a, const Scalar& s) {
    const Field* F = a.F;
    const int d = F->d;
    if (s.exact() && s.in_prime_field() && s.ex == 0 && (s.c[0] == 1 || s.c[0] == -1)) {
        // additions only
        Poly r = a;
        const bool plus = s.c[0] == 1;
        for (long i = 0; i < r.n; ++i)
            for (long k = r.n - 2; k >= i; --k)
                for (int t = 0; t < d; ++t) {
                    if (r.c[(k + 1) * d + t] == 0) continue;
                    if (plus)
                        r.c[k * d + t] += r.c[(k + 1) * d + t];
                    else
                        r.c[k * d + t] -= r.c[(k + 1) * d + t];
                }
        r.reduce();
        return r;
    }
    std::vector<Scalar> v = a.scalars();
    const long n = a.n;
    for (long i = 0; i < n; ++i)
        for (long k = n - 2; k >= i; --k) v[k] = v[k] + v[k + 1] * s;
    return Poly::from_scalars(F, v);
}

}  // namespace rs
