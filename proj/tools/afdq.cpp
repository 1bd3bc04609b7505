#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slicereg/afd.hpp"
#include "slicereg/io.hpp"
#include "slicereg/verify.hpp"

namespace {

// Relative --out/--csv paths land in $AFDQ_OUT_DIR when it is set.
std::string resolve_output(const std::string& path) {
    if (path.empty() || path.front() == '/')
        return path;
    if (const char* dir = std::getenv("AFDQ_OUT_DIR"))
        return std::string(dir) + "/" + path;
    return path;
}

struct DecomposeArgs {
    std::string input;
    int iters = 100;
    double energy_tol = 1e-10;
    std::string config;
    std::string out;
    std::string csv;
    double rho_max = 0.95;
    bool rho_max_set = false;
    int trunc_order = 0;
    bool trunc_order_set = false;
};

slicereg::SearchConfigd load_config(const std::string& config_path, bool rho_max_set,
                                    double rho_max) {
    slicereg::SearchConfigd cfg;
    if (!config_path.empty())
        from_json(slicereg::parse_json_file(config_path), cfg);
    if (rho_max_set)
        cfg.rho_max = rho_max;
    if (cfg.rho_max <= 0 || cfg.rho_max >= 1)
        throw std::runtime_error("rho_max must lie in (0, 1)");
    return cfg;
}

slicereg::SliceSeriesd signal_at_order(const slicereg::SignalSpec& spec, bool order_set,
                                       int order) {
    if (!order_set)
        return spec.series;
    if (order < 0)
        throw std::runtime_error("trunc_order must be nonnegative");
    if (spec.atoms)
        return spec.atoms->synthesize(order);
    return spec.series.truncated(order);
}

int cmd_decompose(const DecomposeArgs& args) {
    const slicereg::SearchConfigd cfg =
        load_config(args.config, args.rho_max_set, args.rho_max);
    const slicereg::SignalSpec spec = slicereg::load_signal_spec_file(args.input);
    const slicereg::SliceSeriesd f =
        signal_at_order(spec, args.trunc_order_set, args.trunc_order);

    const slicereg::AFDStated state =
        slicereg::afd_decompose(f, args.iters, args.energy_tol, cfg);

    if (!args.out.empty())
        slicereg::write_text_file(
            resolve_output(args.out),
            slicereg::result_json(state, cfg, args.iters, args.energy_tol).dump(2) + "\n");
    if (!args.csv.empty()) {
        std::optional<double> certificate;
        if (spec.atoms)
            certificate = spec.atoms->certificate();
        slicereg::write_text_file(resolve_output(args.csv),
                                  slicereg::decay_csv(state.remainder_norms, certificate));
    }

    const double fnorm = state.remainder_norms.front();
    const double rel = fnorm > 0 ? state.remainder_norms.back() / fnorm : 0.0;
    std::cout << "steps=" << state.steps()
              << " final_relative_remainder=" << slicereg::format_real(rel) << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    std::vector<std::string> names;
    if (suite == "all")
        names = slicereg::suite_names();
    else
        names.push_back(suite);

    bool all_pass = true;
    for (const auto& name : names) {
        const slicereg::SuiteReport report = slicereg::run_suite(name, seed);
        slicereg::print_report(std::cout, report);
        all_pass = all_pass && report.pass();
    }
    std::cout << "result: " << (all_pass ? "pass" : "FAIL") << "\n";
    return all_pass ? 0 : 1;
}

int cmd_rate(const std::string& input, int iters, const std::string& csv,
             const std::string& config, bool rho_max_set, double rho_max, bool order_set,
             int order) {
    const slicereg::SearchConfigd cfg = load_config(config, rho_max_set, rho_max);
    const slicereg::SignalSpec spec = slicereg::load_signal_spec_file(input);
    if (spec.kind != slicereg::SignalSpec::Kind::atoms)
        throw CLI::ValidationError("rate",
                                   "rate needs an atoms-kind signal (the decay "
                                   "envelope requires the certificate M)");
    if (spec.atoms->atoms.empty())
        throw CLI::ValidationError("rate", "rate needs at least one atom");

    const int N = order_set ? order : spec.trunc_order;
    const slicereg::RateReportd report =
        slicereg::rate_report(*spec.atoms, iters, cfg, N);
    if (!csv.empty())
        slicereg::write_text_file(resolve_output(csv), slicereg::rate_csv(report));

    std::cout << "rows=" << report.rows.size()
              << " certificate=" << slicereg::format_real(report.certificate)
              << " all_pass=" << (report.all_pass() ? "true" : "false") << "\n";
    return report.all_pass() ? 0 : 1;
}

int cmd_eval(const std::string& input, const std::vector<double>& point, bool order_set,
             int order) {
    const slicereg::SignalSpec spec = slicereg::load_signal_spec_file(input);
    const slicereg::SliceSeriesd f = signal_at_order(spec, order_set, order);
    const slicereg::Quaterniond q(point[0], point[1], point[2], point[3]);
    const nlohmann::json out = eval(f, q);
    std::cout << out.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive Fourier decomposition of slice regular functions "
                 "on the quaternionic unit ball"};
    app.require_subcommand(1);

    DecomposeArgs dec_args;
    CLI::App* dec = app.add_subcommand(
        "decompose", "Greedy decomposition of a signal into weighted Blaschke terms");
    dec->add_option("--input", dec_args.input, "Signal spec JSON (coeffs or atoms kind)")
        ->required();
    dec->add_option("--iters", dec_args.iters, "Maximum number of greedy steps")
        ->check(CLI::PositiveNumber);
    dec->add_option("--energy-tol", dec_args.energy_tol,
                    "Stop when |r|^2 <= tol * |f|^2")
        ->check(CLI::NonNegativeNumber);
    dec->add_option("--config", dec_args.config, "Search config JSON; flags override it");
    dec->add_option("--out", dec_args.out, "Write the decomposition result JSON here");
    dec->add_option("--csv", dec_args.csv, "Write the energy decay CSV here");
    CLI::Option* dec_rho =
        dec->add_option("--rho-max", dec_args.rho_max, "Search radius cap in (0,1)");
    CLI::Option* dec_ord = dec->add_option("--trunc-order", dec_args.trunc_order,
                                           "Override the signal truncation order");

    std::string ver_suite;
    std::uint64_t ver_seed = slicereg::kDefaultSeed;
    CLI::App* ver = app.add_subcommand("verify", "Run a property-check suite");
    ver->add_option("suite", ver_suite,
                    "One of: algebra, kernels, tm, shift, afd, rate, all")
        ->required();
    ver->add_option("--seed", ver_seed, "Seed for the randomized draws");

    std::string rate_input, rate_csv_path, rate_config;
    int rate_iters = 50;
    double rate_rho = 0.95;
    int rate_order = 0;
    CLI::App* rate = app.add_subcommand(
        "rate", "Check the remainder decay of an atomic signal against its envelope");
    rate->add_option("--input", rate_input, "Signal spec JSON, atoms kind")->required();
    rate->add_option("--iters", rate_iters, "Number of greedy steps to tabulate")
        ->check(CLI::PositiveNumber);
    rate->add_option("--csv", rate_csv_path, "Write the rate table CSV here");
    rate->add_option("--config", rate_config, "Search config JSON; flags override it");
    CLI::Option* rate_rho_opt =
        rate->add_option("--rho-max", rate_rho, "Search radius cap in (0,1)");
    CLI::Option* rate_ord =
        rate->add_option("--trunc-order", rate_order, "Synthesis truncation order");

    std::string eval_input;
    std::vector<double> eval_point;
    int eval_order = 0;
    CLI::App* evl = app.add_subcommand("eval", "Evaluate a signal at a point");
    evl->add_option("--input", eval_input, "Signal spec JSON")->required();
    evl->add_option("--point", eval_point, "Evaluation point as w x y z")
        ->expected(4)
        ->required();
    CLI::Option* evl_ord =
        evl->add_option("--trunc-order", eval_order, "Override the truncation order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*dec) {
            dec_args.rho_max_set = dec_rho->count() > 0;
            dec_args.trunc_order_set = dec_ord->count() > 0;
            return cmd_decompose(dec_args);
        }
        if (*ver)
            return cmd_verify(ver_suite, ver_seed);
        if (*rate)
            return cmd_rate(rate_input, rate_iters, rate_csv_path, rate_config,
                            rate_rho_opt->count() > 0, rate_rho, rate_ord->count() > 0,
                            rate_order);
        if (*evl)
            return cmd_eval(eval_input, eval_point, evl_ord->count() > 0, eval_order);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        // internal consistency assertions (coefficient/objective drift)
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
