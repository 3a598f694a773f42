#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "rs/wach.hpp"

namespace rs {

// Fixed orderings: eigen components (aa, ab, ba, bb) and signed components
// (##, #b, b#, bb).
extern const std::array<const char*, 4> kEigenLabels;
extern const std::array<const char*, 4> kSignedLabels;

struct SignedQuadruple {
    std::array<LambdaElement, 4> F;
    bool integral() const;
    int level() const { return F[0].level(); }
};

// One distribution tower per eigen component.
struct AnalyticQuadruple {
    std::array<DistApproximant, 4> F;
    int top_level() const { return (int)F[0].levels.size() - 1; }
    const LambdaElement& at(int i, int n) const { return F[i].levels[n]; }
};

enum class Direction { VBasis, Eigen };

// M_log x (VBasis) or Q^-1 M_log x (Eigen), at every level up to the level of x.
AnalyticQuadruple coleman_decompose(const SignedQuadruple& x, const LogMatrixBundle& B,
                                    Direction dir = Direction::Eigen);

// Random element of Lambda / omega_{n,m} with integer coefficients in [-bound, bound].
LambdaElement random_lambda(const LambdaRing& R, int n, int m, std::mt19937_64& rng, long bound = 20);
SignedQuadruple random_signed(const LogMatrixBundle& B, int n, unsigned long long seed);

struct VanishingRow {
    int j = 0;
    int c = 0;        // conductor p^c
    long i0 = 0;      // Delta part of theta
    long residual_val = INF;
    bool pass = true;
};
struct VanishingCertificate {
    bool pass = true;
    std::vector<VanishingRow> rows;
    std::string first_failure() const;
};

// Fil^(-j) membership of sum (lambda mu)^c F(chi^j theta) v_{lambda mu} for theta of conductor p^c.
VanishingRow vanishing_check(const AnalyticQuadruple& F, const LogMatrixBundle& B, int j, int c, long i0);
VanishingCertificate vanishing_certificate(const AnalyticQuadruple& F, const LogMatrixBundle& B, int j_lo, int j_hi);

struct SplitCertificate {
    bool prereq = true;
    long stage_a_remainder_val = INF;       // division of the lifted adjugate by its forced factor
    long stage_b_remainder_val = INF;       // y rem N_{n,m} (or N_{n,h+1} for the partial split)
    std::vector<long> level_residual_vals;  // forward image of the recovered x minus the target
    long level0_error_val = INF;            // recovered x versus the generator, if known
    long kernel_image_val = INF;            // Q^-1 M_log k for the exhibited kernel element
    long kernel_element_val = INF;          // valuation of k itself (finite means k != 0)
    bool integral = true;
    bool pass = false;
    std::string detail;
};

struct SplitResult {
    SignedQuadruple x;            // recovered modulo omega_{0,m}
    SplitCertificate cert;
};

SplitResult signed_split(const AnalyticQuadruple& F, const LogMatrixBundle& B);
SplitResult partial_split(const AnalyticQuadruple& F, const LogMatrixBundle& B);

// Forward model that satisfies the vanishing conditions only for j <= max(kf, kg).
AnalyticQuadruple restricted_range_model(const SignedQuadruple& x, const LogMatrixBundle& B,
                                         unsigned long long seed);
// N_{n,m} / N_{n,h+1}, h = max(kf, kg), in the Z basis.
Poly partial_ratio_z(const LogMatrixBundle& B, const LambdaRing& R, int n);

struct AntisymResult {
    std::vector<LMat> out;        // per level
    long antisym_residual = INF;  // worst valuation of out(i,j) + out(j,i) and of the diagonal
    long oracle_residual = INF;   // worst valuation of out minus the 2x2-minor expansion
    bool pass = false;
};
AntisymResult antisym_transport(const std::vector<LMat>& M_sign, const LogMatrixBundle& B);
std::vector<LMat> random_antisymmetric(const LogMatrixBundle& B, unsigned long long seed);

struct ImageEntry {
    int S = 0;           // index into image_pairs()
    int eta = 0;         // eta = omega^eta
    int j = 0;
    int n = 0;           // n_{S,eta,j}
    int n_oracle = 0;
    int fil_dim = 0;
    int ideal_degree = 0;   // sum over j < m of n_{S,eta,j}
};
struct ImageTable {
    std::vector<ImageEntry> rows;
    bool pass = true;
    std::string csv() const;
};
const std::vector<std::array<int, 2>>& image_pairs();
std::string pair_label(int S);
ImageTable image_dimensions(const LogMatrixBundle& B);
int rank_over(const SMat& M, long floor);

}  // namespace rs
