#pragma once

#include <vector>

#include "rs/field.hpp"

namespace rs {

using SMat = std::vector<std::vector<Scalar>>;

SMat smat_zero(const Field* F, int r, int c);
SMat smat_identity(const Field* F, int n);
SMat operator*(const SMat& a, const SMat& b);
SMat smat_add(const SMat& a, const SMat& b);
SMat smat_sub(const SMat& a, const SMat& b);
// Gaussian elimination with minimal-valuation pivots.
Scalar det(const SMat& a);
SMat inverse(const SMat& a);                  // SingularQ if not invertible
std::vector<Scalar> solve(const SMat& a, const std::vector<Scalar>& b);
SMat adjugate(const SMat& a);                 // cofactor expansion, n <= 4
bool smat_same(const SMat& a, const SMat& b);

}  // namespace rs
