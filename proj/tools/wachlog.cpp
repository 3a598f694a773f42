// wachlog: build logarithmic matrices, run the verification suites, split
// quadruples and print the image-dimension table.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rs/io.hpp"

using namespace rs;

namespace {

struct Args {
    std::string apf = "0", apg = "5", epsf = "1", epsg = "1", u;
    std::string out;
    // verify
    std::string suite = "all";
    bool perturb = false;
    // split
    std::string in, mode = "full";
    // forward
    std::string model = "full", generator_out;
};

mpz_class parse_int(const std::string& s, const char* what) {
    mpz_class r;
    if (s.empty() || r.set_str(s, 10) != 0) fail(Err::InvalidInput, std::string("--") + what + " expects an integer");
    return r;
}

RunConfig finalize(RunConfig c, const Args& a) {
    c.apf = parse_int(a.apf, "apf");
    c.apg = parse_int(a.apg, "apg");
    c.epsf = parse_int(a.epsf, "epsf");
    c.epsg = parse_int(a.epsg, "epsg");
    c.u = a.u.empty() ? mpz_class(c.p + 1) : parse_int(a.u, "u");
    if (c.levels < 0) fail(Err::InvalidInput, "--levels must be non-negative");
    if (c.prec <= c.guard || c.guard < 0) fail(Err::InvalidInput, "need prec > guard >= 0");
    return c;
}

LogMatrixBundle make_bundle(const RunConfig& c) {
    FormPair pr = make_form_pair(c.p, c.kf, c.kg, c.apf, c.apg, c.epsf, c.epsg, c.prec + c.guard);
    return build_bundle(pr, c.u, c.levels, c.prec, c.guard);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(Err::InvalidInput, "cannot write " + path);
    f << text;
}

json read_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(Err::InvalidInput, "cannot read " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        fail(Err::InvalidInput, path + " is not valid JSON: " + e.what());
    }
}

std::string val_str(long v) { return v >= INF ? "inf" : std::to_string(v); }

int cmd_logmatrix(const RunConfig& c, const Args& a) {
    LogMatrixBundle B = make_bundle(c);
    emit(a.out.empty() ? "logmatrix.json" : a.out, bundle_json(B, c).dump(1) + "\n");
    bool all = true;
    for (const auto& ch : B.ledger) {
        std::printf("%-44s n=%d  %-6s  residual %s\n", ch.name.c_str(), ch.level, ch.pass ? "pass" : "FAIL",
                    val_str(ch.residual_val).c_str());
        all = all && ch.pass;
    }
    return all ? 0 : 1;
}

int cmd_verify(const RunConfig& c, const Args& a) {
    std::vector<std::string> names;
    if (a.suite == "all")
        names = suite_names();
    else
        names = {a.suite};
    for (const auto& s : names)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            fail(Err::InvalidInput, "unknown suite " + s);
    LogMatrixBundle B = make_bundle(c);
    SuiteOptions opt;
    opt.seed = c.seed;
    opt.perturb = a.perturb;
    std::vector<SuiteReport> reps;
    for (const auto& s : names) {
        reps.push_back(run_suite(s, B, opt));
        const SuiteReport& r = reps.back();
        std::printf("== %s: %s\n", s.c_str(), r.pass ? "pass" : "FAIL");
        for (const auto& ch : r.checks)
            std::printf("  %-44s n=%d  %-6s  residual %-5s  %s\n", ch.name.c_str(), ch.level, ch.pass ? "pass" : "FAIL",
                        val_str(ch.residual_val).c_str(), ch.statement.c_str());
        if (!r.error.empty()) std::printf("  stopped: %s\n", r.error.c_str());
    }
    json rep = report_json(reps, c);
    if (!a.out.empty()) emit(a.out, rep.dump(1) + "\n");
    return rep["pass"].get<bool>() ? 0 : 1;
}

int cmd_split(const RunConfig& c, const Args& a) {
    if (a.mode != "full" && a.mode != "partial") fail(Err::InvalidInput, "--mode is full or partial");
    LogMatrixBundle B = make_bundle(c);
    AnalyticQuadruple F = analytic_from_json(read_json(a.in), B);
    SplitResult r = a.mode == "full" ? signed_split(F, B) : partial_split(F, B);
    emit(a.out.empty() ? "split.json" : a.out, signed_json(r.x, &r.cert, c).dump(1) + "\n");
    std::printf("certificate: %s\n", r.cert.pass ? "pass" : "FAIL");
    for (size_t k = 0; k < r.cert.level_residual_vals.size(); ++k)
        std::printf("  level %zu residual %s\n", k, val_str(r.cert.level_residual_vals[k]).c_str());
    std::printf("  stage B remainder %s\n", val_str(r.cert.stage_b_remainder_val).c_str());
    if (!r.cert.detail.empty()) std::printf("  %s\n", r.cert.detail.c_str());
    return r.cert.pass ? 0 : 1;
}

int cmd_images(const RunConfig& c, const Args& a) {
    LogMatrixBundle B = make_bundle(c);
    ImageTable t = image_dimensions(B);
    emit(a.out, t.csv());
    return t.pass ? 0 : 1;
}

// Input generator for split: a seeded random signed quadruple pushed
// through the forward map.
int cmd_forward(const RunConfig& c, const Args& a) {
    if (a.model != "full" && a.model != "restricted") fail(Err::InvalidInput, "--model is full or restricted");
    LogMatrixBundle B = make_bundle(c);
    SignedQuadruple x = random_signed(B, B.n_max, c.seed);
    AnalyticQuadruple F = a.model == "full" ? coleman_decompose(x, B) : restricted_range_model(x, B, c.seed + 1);
    emit(a.out.empty() ? "forward.json" : a.out, analytic_json(F, c).dump(1) + "\n");
    if (!a.generator_out.empty()) emit(a.generator_out, signed_json(x, nullptr, c).dump(1) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Logarithmic matrices and signed Coleman maps for Rankin-Selberg products"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value file; flags override it");
    RunConfig c;
    Args a;
    app.add_option("--p", c.p, "prime");
    app.add_option("--kf", c.kf, "weight of f minus 2");
    app.add_option("--kg", c.kg, "weight of g minus 2");
    app.add_option("--apf", a.apf, "a_p(f)");
    app.add_option("--apg", a.apg, "a_p(g)");
    app.add_option("--epsf", a.epsf, "epsilon_f(p)");
    app.add_option("--epsg", a.epsg, "epsilon_g(p)");
    app.add_option("--u", a.u, "chi(gamma); defaults to 1 + p");
    app.add_option("--levels", c.levels, "top level n_max");
    app.add_option("--prec", c.prec, "working precision");
    app.add_option("--guard", c.guard, "guard digits");
    app.add_option("--seed", c.seed, "seed for randomized suites");
    app.add_option("--out", a.out, "output file");

    auto* lm = app.add_subcommand("logmatrix", "write the logarithmic matrix bundle");
    auto* ver = app.add_subcommand("verify", "run verification suites");
    ver->add_option("--suite", a.suite, "mellin, congruences, adj, growth, split-roundtrip, antisym, images or all");
    ver->add_flag("--perturb", a.perturb, "inject a unit perturbation into each suite");
    auto* sp = app.add_subcommand("split", "recover a signed quadruple");
    sp->add_option("--in", a.in, "analytic quadruple JSON")->required();
    sp->add_option("--mode", a.mode, "full or partial");
    auto* im = app.add_subcommand("images", "print the image-dimension table as CSV");
    auto* fw = app.add_subcommand("forward", "generate a seeded analytic quadruple");
    fw->add_option("--model", a.model, "full or restricted");
    fw->add_option("--generator-out", a.generator_out, "also write the generating signed quadruple");
    for (auto* s : {lm, ver, sp, im, fw}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = finalize(c, a);
        if (lm->parsed()) return cmd_logmatrix(cfg, a);
        if (ver->parsed()) return cmd_verify(cfg, a);
        if (sp->parsed()) return cmd_split(cfg, a);
        if (im->parsed()) return cmd_images(cfg, a);
        if (fw->parsed()) return cmd_forward(cfg, a);
    } catch (const Error& e) {
        std::fprintf(stderr, "wachlog: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "wachlog: %s\n", e.what());
        return 2;
    }
    return 2;
}
