#pragma once

#include <string>
#include <vector>

#include "rs/signed.hpp"

namespace rs {

struct SuiteOptions {
    unsigned long long seed = 1;
    bool perturb = false;         // inject one unit perturbation (negative control)
    int mellin_samples = 50;      // per level
    int divisibility_samples = 20;
    int split_samples = 20;
    int partial_samples = 10;
    int antisym_samples = 20;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckRecord> checks;   // sorted by (name, level)
    bool pass = true;
    std::string error;                 // set when the suite stopped on an exception
};

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const LogMatrixBundle& B, const SuiteOptions& opt);

}  // namespace rs
