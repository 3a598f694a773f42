#include "rs/linalg.hpp"

namespace rs {

SMat smat_zero(const Field* F, int r, int c) { return SMat(r, std::vector<Scalar>(c, Scalar::zero(F))); }

SMat smat_identity(const Field* F, int n) {
    SMat m = smat_zero(F, n, n);
    for (int i = 0; i < n; ++i) m[i][i] = Scalar::one(F);
    return m;
}

SMat operator*(const SMat& a, const SMat& b) {
    const Field* F = a[0][0].F;
    SMat r = smat_zero(F, a.size(), b[0].size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k) {
            if (a[i][k].is_exact_zero()) continue;
            for (size_t j = 0; j < b[0].size(); ++j) r[i][j] = r[i][j] + a[i][k] * b[k][j];
        }
    return r;
}

SMat smat_add(const SMat& a, const SMat& b) {
    SMat r = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

SMat smat_sub(const SMat& a, const SMat& b) {
    SMat r = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
}

namespace {
// Row-reduces [a | b]; returns the sign-adjusted determinant.
Scalar eliminate(SMat& a, SMat* b) {
    const int n = a.size();
    const Field* F = a[0][0].F;
    Scalar d = Scalar::one(F);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        long best = INF;
        for (int r = col; r < n; ++r) {
            long v = a[r][col].val_e();
            if (v < best) best = v, piv = r;
        }
        if (piv < 0) return Scalar::zero(F);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            if (b) std::swap((*b)[piv], (*b)[col]);
            d = -d;
        }
        d = d * a[col][col];
        Scalar ip = inv(a[col][col]);
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_exact_zero()) continue;
            Scalar f = a[r][col] * ip;
            for (int c = col; c < n; ++c) a[r][c] = a[r][c] - f * a[col][c];
            if (b)
                for (size_t c = 0; c < (*b)[r].size(); ++c) (*b)[r][c] = (*b)[r][c] - f * (*b)[col][c];
        }
        for (int c = col; c < n; ++c) a[col][c] = a[col][c] * ip;
        if (b)
            for (auto& x : (*b)[col]) x = x * ip;
    }
    return d;
}
}  // namespace

Scalar det(const SMat& a0) {
    SMat a = a0;
    return eliminate(a, nullptr);
}

SMat inverse(const SMat& a0) {
    SMat a = a0;
    SMat b = smat_identity(a0[0][0].F, a0.size());
    Scalar d = eliminate(a, &b);
    if (d.is_zero()) fail(Err::SingularQ, "matrix is singular at working precision");
    return b;
}

std::vector<Scalar> solve(const SMat& a0, const std::vector<Scalar>& rhs) {
    SMat a = a0;
    SMat b(rhs.size());
    for (size_t i = 0; i < rhs.size(); ++i) b[i] = {rhs[i]};
    Scalar d = eliminate(a, &b);
    if (d.is_zero()) fail(Err::SingularQ, "linear system is singular at working precision");
    std::vector<Scalar> x;
    for (auto& r : b) x.push_back(r[0]);
    return x;
}

namespace {
Scalar minor_det(const SMat& a, std::vector<int> rows, std::vector<int> cols) {
    const int n = rows.size();
    if (n == 0) return Scalar::one(a[0][0].F);
    if (n == 1) return a[rows[0]][cols[0]];
    Scalar s = Scalar::zero(a[0][0].F);
    for (int j = 0; j < n; ++j) {
        if (a[rows[0]][cols[j]].is_exact_zero()) continue;
        std::vector<int> r2(rows.begin() + 1, rows.end()), c2;
        for (int k = 0; k < n; ++k)
            if (k != j) c2.push_back(cols[k]);
        Scalar t = a[rows[0]][cols[j]] * minor_det(a, r2, c2);
        s = (j % 2 == 0) ? s + t : s - t;
    }
    return s;
}
}  // namespace

SMat adjugate(const SMat& a) {
    const int n = a.size();
    SMat r = smat_zero(a[0][0].F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int> rows, cols;
            for (int k = 0; k < n; ++k) {
                if (k != j) rows.push_back(k);
                if (k != i) cols.push_back(k);
            }
            Scalar m = minor_det(a, rows, cols);
            r[i][j] = ((i + j) % 2 == 0) ? m : -m;
        }
    return r;
}

bool smat_same(const SMat& a, const SMat& b) {
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j)
            if (!same(a[i][j], b[i][j])) return false;
    return true;
}

}  // namespace rs
