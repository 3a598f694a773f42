#pragma once

#include <string>
#include <vector>

#include "rs/lambda.hpp"
#include "rs/linalg.hpp"
#include "rs/roots.hpp"

namespace rs {

struct FormPair {
    long p = 0;
    long kf = 0, kg = 0;
    mpz_class apf, apg, epsf, epsg;
    FieldDescriptor E;
    Scalar alpha_f, beta_f, alpha_g, beta_g;   // in E
    long m() const { return kf + kg + 2; }
};

FormPair make_form_pair(long p, long kf, long kg, const mpz_class& apf, const mpz_class& apg, const mpz_class& epsf,
                        const mpz_class& epsg, long prec);

using PMat = std::vector<std::vector<Poly>>;
using LMat = std::vector<std::vector<LambdaElement>>;

PMat pmat_mul(const PMat& a, const PMat& b);
PMat pmat_left(const SMat& a, const PMat& b);       // scalar matrix times polynomial matrix
PMat pmat_phi(const PMat& a, long p);               // Y -> Y^p on every entry
PMat pmat_identity(const Field* F, int n);

LMat lmat_mul(const LMat& a, const LMat& b);
LMat lmat_left(const SMat& a, const LMat& b);
LambdaElement lmat_det(const LMat& a);
LMat lmat_adj(const LMat& a);
LMat lmat_embed(const LambdaRing& RE, const LMat& a);
LambdaElement embed(const LambdaRing& RE, const LambdaElement& a);
Poly embed_poly(const Field* E, const Poly& a);
SMat embed_mat(const Field* E, const SMat& a);

struct CheckRecord {
    std::string name;
    std::string statement;
    int level = 0;
    long residual_val = INF;   // valuation of the residual, INF for exact zero
    bool pass = false;
    std::string detail;
};

struct LogMatrixBundle {
    FormPair pair;
    long prec = 60, guard = 5;
    int n_max = 2;
    LambdaRing R;     // over Q_p
    LambdaRing RE;    // over E

    SMat Af, Ag, A0, A;          // over Q_p
    SMat Q, Qinv, D;             // over E
    long cQ = 0;                 // -min valuation of Q^-1 entries (floor)

    PMat P_pi;                   // displayed P as truncated pi-series (pi basis)
    long P_N = 0;                // its pi-truncation
    PMat Pinv_pi;                // displayed P^-1, exact polynomials in pi
    PMat Pw_inv_pi;              // Wach-normalized P^-1 in pi
    PMat Pw_inv;                 // same in Y
    Poly r_pi;                   // normalizing scalar r in pi

    std::vector<PMat> T;         // T[k] = phi^k(Pw^-1) ... Pw^-1
    std::vector<PMat> Mtrunc;    // level n: A^n T[n-1], level 0 = I
    std::vector<PMat> Hy;        // Y * phi(T[n-1]) before reduction (level n); level 0 = Y I
    std::vector<LMat> H;         // Mellin inverse, modulo omega_{n,m}
    std::vector<LMat> Mlog;      // A^(n+1) H_n

    std::vector<CheckRecord> ledger;

    long floor() const { return prec - guard; }
    int m() const { return pair.m(); }
};

LogMatrixBundle build_bundle(const FormPair& pair, const mpz_class& u, int n_max, long prec, long guard);

// Individual pieces, exposed for tests.
SMat frobenius_A0(const FormPair& pr);
SMat frobenius_A(const FormPair& pr);
void build_Q_D(const FormPair& pr, SMat* Q, SMat* D);
PMat displayed_P_inverse_pi(const FormPair& pr, const Field* F);
PMat displayed_P_pi(const FormPair& pr, const Field* F, long N);
Poly wach_normalizer_pi(const Field* F, long m);

std::vector<CheckRecord> congruence_checks(const LogMatrixBundle& B);
std::vector<CheckRecord> p_inverse_checks(const LogMatrixBundle& B);

// Group-ring lift y = sum_a y_a sigma_a (a = 1 mod p) reduced modulo
// (Tw^-i omega_k)^e, in the Z basis.
std::vector<Poly> group_ring_pieces(const LambdaRing& R, const std::vector<Poly>& ys, int k, long i, int e);

// A^(k+1) H_k from its exact group-ring lift, reduced modulo (Tw^-i omega_k)^e.
PMat mlog_lift_piece(const LogMatrixBundle& B, int k, long i, int e);
Poly pmat_det_mod(const PMat& a, const Poly& mod);
PMat pmat_adj_mod(const PMat& a, const Poly& mod);

struct MultiplicityRow {
    int k = 0;          // level of the root of unity
    long i = 0;         // twist
    int found = 0;
    int expected = 0;
};
struct DetReport {
    bool pass = true;
    bool vanishes = true;        // reduced representative vanishes on all twisted Phi_k, 1 <= k <= n
    bool nonzero_level0 = true;  // and not at u^j - 1
    std::vector<MultiplicityRow> rows;
    std::string detail;
};
DetReport det_structure_check(const LogMatrixBundle& B, int n);

struct AdjReport {
    bool pass = true;
    bool literal = true;   // adj(level-n representative) vanishes on N_{n,max(a,b)}
    bool fattened = true;  // on the exact lifts with multiplicities
    LMat quotient;         // adj / N_{n,max(a,b)} as polynomial quotients
    std::string detail;
};
AdjReport adj_divisibility_check(const LogMatrixBundle& B, int n);
bool adj_literal_divisible(const LMat& M, const Modulus& N, const LambdaRing& R, long floor);

struct GrowthRow {
    int level = 0;
    int index = 0;          // row of Q^-1 M_log, ordered aa, ab, ba, bb
    mpq_class min_val;
    mpq_class bound;        // -(n+1) v(lambda mu) - cQ
    bool pass = true;
};
struct GrowthReport {
    bool pass = true;
    std::vector<GrowthRow> rows;
    bool H_integral = true;
};
GrowthReport growth_check(const LogMatrixBundle& B, int n);

// Q^-1 M_log at level n, over E.
LMat qinv_mlog(const LogMatrixBundle& B, int n);

// Filtration: Fil^(-j) is spanned by v1, v2 if j >= kf+1, v3 if j >= kg+1, v4 if j >= m.
std::vector<int> filtration_generators(const FormPair& pr, int j);

}  // namespace rs
