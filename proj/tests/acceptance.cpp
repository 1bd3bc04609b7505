// Acceptance gate: one line per criterion, exit 0 only if all pass.
// Criteria 1-9 reuse the shared property checks; criterion 10 drives the
// CLI binary (path in argv[1]) and compares raw output bytes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "slicereg/io.hpp"
#include "slicereg/verify.hpp"

using namespace slicereg;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s (%s)\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fmts(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1fs", v);
    return buf;
}

// Checks plus a runtime budget in seconds; detail lists each worst value.
void criterion_from_checks(int criterion, const std::vector<PropertyCheck>& checks,
                           double budget) {
    bool pass = true;
    double total = 0;
    std::string detail;
    for (const auto& c : checks) {
        pass = pass && c.pass;
        total += c.seconds;
        if (!detail.empty())
            detail += ", ";
        detail += c.name + " " + fmt(c.worst) + " vs " + fmt(c.tol);
    }
    pass = pass && total <= budget;
    detail += ", " + fmts(total) + " of " + fmts(budget);
    report(criterion, pass, detail);
}

struct CliRun {
    int exit_code;
    std::string output;
};

CliRun run_cli(const std::string& cmd) {
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) {
        std::perror("popen");
        std::exit(3);
    }
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return "<unreadable:" + path + ">";
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_one_atom(int criterion) {
    Rng rng(kDefaultSeed ^ 0xE1);
    double worst_param = 0, worst_rel = 0, worst_seconds = 0;
    for (int i = 0; i < 3; ++i) {
        const BallPointd b(rng.ball(0.8));
        const Quaterniond c = rng.quat();
        const SliceSeriesd f = szego_kernel(b, kDefaultOrder) * c;
        const auto t0 = std::chrono::steady_clock::now();
        const AFDStated state = afd_decompose(f, 1, 1e-12, SearchConfigd{});
        const auto t1 = std::chrono::steady_clock::now();
        worst_seconds =
            std::max(worst_seconds, std::chrono::duration<double>(t1 - t0).count());
        worst_param =
            std::max(worst_param, (state.tm.param(0).value() - b.value()).norm());
        worst_rel = std::max(worst_rel,
                             state.remainder_norms.back() / state.remainder_norms[0]);
    }
    const bool pass = worst_param <= 1e-4 && worst_rel <= 1e-6 && worst_seconds <= 5.0;
    report(criterion, pass,
           "param " + fmt(worst_param) + " vs 1e-04, remainder " + fmt(worst_rel) +
               " vs 1e-06, slowest instance " + fmts(worst_seconds) + " of " + fmts(5));
}

void criterion_determinism(int criterion, const std::string& cli) {
    const CliRun v1 = run_cli(cli + " verify all");
    const CliRun v2 = run_cli(cli + " verify all");
    const bool verify_same = v1.output == v2.output;
    const bool verify_ok = v1.exit_code == 0 && v2.exit_code == 0 && verify_same;

    char tmpl[] = "/tmp/slicereg_accept_XXXXXX";
    const char* dir_c = mkdtemp(tmpl);
    if (!dir_c) {
        report(criterion, false, "mkdtemp failed");
        return;
    }
    const std::string dir = dir_c;
    {
        std::ofstream fix(dir + "/fixture.json");
        fix << "{\"kind\": \"atoms\", \"trunc_order\": 128, \"atoms\": [\n"
               " {\"param\": [0.35, 0.2, -0.1, 0.0], \"coeff\": [1.0, 0.5, 0.0, 0.0]},\n"
               " {\"param\": [-0.2, 0.0, 0.4, 0.3], \"coeff\": [0.0, 0.0, 2.0, 0.0]},\n"
               " {\"param\": [0.0, 0.6, 0.0, 0.0], \"coeff\": [0.5, 0.0, 0.0, -1.0]}\n"
               "]}\n";
    }
    const std::string base = cli + " decompose --input " + dir + "/fixture.json --iters 8";
    const CliRun d1 =
        run_cli(base + " --out " + dir + "/r1.json --csv " + dir + "/r1.csv");
    const CliRun d2 =
        run_cli(base + " --out " + dir + "/r2.json --csv " + dir + "/r2.csv");
    const bool decompose_ok = d1.exit_code == 0 && d2.exit_code == 0 &&
                              d1.output == d2.output &&
                              slurp(dir + "/r1.json") == slurp(dir + "/r2.json") &&
                              slurp(dir + "/r1.csv") == slurp(dir + "/r2.csv");

    report(criterion, verify_ok && decompose_ok,
           std::string("verify-all runs ") + (verify_same ? "identical" : "DIFFER") +
               " (exit " + std::to_string(v1.exit_code) + "/" +
               std::to_string(v2.exit_code) + "), decompose fixture runs " +
               (decompose_ok ? "identical" : "DIFFER"));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
        return 3;
    }
    const std::string cli = std::string("\"") + argv[1] + "\"";
    const std::uint64_t seed = kDefaultSeed;

    criterion_from_checks(1,
                          {check_star_associativity(seed ^ 0xA1),
                           check_conjugate_reversal(seed ^ 0xA2),
                           check_reciprocal_identity(seed ^ 0xA3)},
                          10.0);
    criterion_from_checks(2, {check_reproducing_property(seed ^ 0xB1)}, 5.0);
    criterion_from_checks(3,
                          {check_quadrature_agreement(seed ^ 0xB2),
                           check_quadrature_slice_independence(seed ^ 0xB2)},
                          30.0);
    criterion_from_checks(4,
                          {check_tm_gram_identity(seed ^ 0xC1),
                           check_tm_fourier_exactness()},
                          60.0);
    criterion_from_checks(5,
                          {check_shift_reconstruction(seed ^ 0xD1),
                           check_shift_energy(seed ^ 0xD2)},
                          10.0);
    criterion_one_atom(6);
    criterion_from_checks(7,
                          {check_energy_identity(seed ^ 0xE2),
                           check_remainder_monotonicity(seed ^ 0xE2),
                           check_coefficient_agreement(seed ^ 0xE2)},
                          300.0);
    criterion_from_checks(8,
                          {check_rate_bound(seed ^ 0xF1),
                           check_certificate_bound(seed ^ 0xF1),
                           check_recurrence_lemma(seed ^ 0xF2)},
                          600.0);
    criterion_from_checks(9, {check_boundary_unimodularity(seed ^ 0xB3)}, 2.0);
    criterion_determinism(10, cli);

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
