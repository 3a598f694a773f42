#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rs/signed.hpp"
#include "rs/suites.hpp"

namespace rs {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

// Everything a command needs; embedded verbatim in every report.
struct RunConfig {
    long p = 5;
    long kf = 0, kg = 1;
    mpz_class apf = 0, apg = 5;
    mpz_class epsf = 1, epsg = 1;
    mpz_class u = 6;
    int levels = 2;
    long prec = 60;
    long guard = 5;
    unsigned long long seed = 1;
};
json config_json(const RunConfig& c);

// Valuations: integers, or the string "inf" for an exact zero.
json val_json(long v);
long val_from_json(const json& j);

json scalar_json(const Scalar& a);
Scalar scalar_from_json(const json& j, const Field* F);
json series_json(const Poly& a, long trunc);   // trunc < 0 means exact
json lambda_json(const LambdaElement& a);
// Components carry the field id; R and RE are the candidate rings.
LambdaElement lambda_from_json(const json& j, const LambdaRing& R, const LambdaRing& RE);
json dist_json(const DistApproximant& d);
DistApproximant dist_from_json(const json& j, const LambdaRing& R, const LambdaRing& RE);

json field_json(const FieldDescriptor& E);
json bundle_json(const LogMatrixBundle& B, const RunConfig& c);
json check_json(const CheckRecord& c);

json analytic_json(const AnalyticQuadruple& F, const RunConfig& c);
AnalyticQuadruple analytic_from_json(const json& j, const LogMatrixBundle& B);
json signed_json(const SignedQuadruple& x, const SplitCertificate* cert, const RunConfig& c);
SignedQuadruple signed_from_json(const json& j, const LogMatrixBundle& B);

json report_json(const std::vector<SuiteReport>& reps, const RunConfig& c);

}  // namespace rs
