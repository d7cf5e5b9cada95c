// fsk_main.cpp - command line front end: kernel queries, sector bound
// evaluation, dyadic profile fits, and the experiment verifier.
#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsk/config.hpp"
#include "fsk/dg.hpp"
#include "fsk/experiments.hpp"
#include "fsk/kernel.hpp"
#include "fsk/pl.hpp"
#include "fsk/report.hpp"

extern "C" void openblas_set_num_threads(int);

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int jobs = 1;
    CLI::Option* out_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, CommonArgs& c) {
    sub->add_option("--config", c.config, "key = value configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    c.out_opt = sub->add_option("--out", c.out, "output directory (default: current directory)");
    c.seed_opt = sub->add_option("--seed", c.seed, "override the configured seed");
    sub->add_option("--jobs", c.jobs, "BLAS thread count (default 1, keeps runs reproducible)")
        ->check(CLI::PositiveNumber);
}

// Unknown keys are config mistakes, not extensions; fail loudly.
void reject_unknown(const fsk::KeyValueFile& kv) {
    const auto extra = kv.unconsumed();
    if (!extra.empty())
        throw fsk::ConfigError("unknown key '" + extra.front() + "'", kv.line_of(extra.front()),
                               extra.front());
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    const std::string where = dir.empty() ? std::string(".") : dir;
    std::filesystem::create_directories(where);
    std::ofstream os(std::filesystem::path(where) / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + where + "/" + name);
    return os;
}

// Free-kernel queries on the sweep alpha x theta x modulus x rho, one CSV row
// per point.  A row passes when the quadrature met its error target.
int run_kernel_cmd(const CommonArgs& c) {
    auto kv = fsk::KeyValueFile::parse_file(c.config);
    const double alpha = kv.get_double("alpha", 1.0);
    const int d = static_cast<int>(kv.get_uint("d", 1));
    const auto thetas = kv.get_list("theta", {0.0});
    const auto moduli = kv.get_list("modulus", {1.0});
    const auto rhos = kv.get_list("rho", {0.0, 1.0, 2.0, 4.0});
    fsk::QuadratureSpec spec;
    spec.truncation_tol = kv.get_double("truncation_tol", spec.truncation_tol);
    spec.panel_tol = kv.get_double("panel_tol", spec.panel_tol);
    spec.max_panels = static_cast<int>(kv.get_uint("max_panels",
                                                   static_cast<std::uint64_t>(spec.max_panels)));
    reject_unknown(kv);
    spec.validate();

    auto os = open_out(c.out, "kernel.csv");
    os << "alpha,d,theta,modulus,rho,r,value_re,value_im,abs_value,abs_err,panels,status\n";
    char buf[384];
    int failures = 0;
    for (double theta : thetas)
        for (double mod : moduli)
            for (double rho : rhos) {
                const double r = rho * std::pow(mod, 1.0 / alpha);
                fsk::KernelQuery q{alpha, d, fsk::ComplexTime(mod, theta), r};
                const fsk::KernelResult res = fsk::kernel_free(q, spec);
                const bool ok = res.status == fsk::KernelStatus::ok;
                if (!ok) ++failures;
                std::snprintf(buf, sizeof buf,
                              "%.12e,%d,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%d,%s\n",
                              alpha, d, theta, mod, rho, r, res.value.real(), res.value.imag(),
                              std::abs(res.value), res.abs_err, res.panels,
                              ok ? "pass" : "fail");
                os << buf;
            }
    std::printf("kernel: %zu rows, %d under the error target -> %s\n",
                thetas.size() * moduli.size() * rhos.size(),
                static_cast<int>(thetas.size() * moduli.size() * rhos.size()) - failures,
                failures == 0 ? "PASS" : "FAIL");
    return failures == 0 ? 0 : 1;
}

// Sector interpolation bound on a (theta, modulus) sweep.  The interpolated
// bound can never exceed the assumed sector bound; each row checks that.
int run_plbound_cmd(const CommonArgs& c) {
    auto kv = fsk::KeyValueFile::parse_file(c.config);
    fsk::PolyBoundHypothesis hyp;
    hyp.a1 = kv.get_double("a1", hyp.a1);
    hyp.a2 = kv.get_double("a2", hyp.a2);
    hyp.a3 = kv.get_double("a3", hyp.a3);
    hyp.beta1 = kv.get_double("beta1", hyp.beta1);
    hyp.beta2 = kv.get_double("beta2", hyp.beta2);
    hyp.beta3 = kv.get_double("beta3", hyp.beta3);
    const double epsilon = kv.get_double("epsilon", 0.5);
    const auto thetas = kv.get_list("theta", {0.0});
    const auto moduli = kv.get_list("modulus", {1.0});
    reject_unknown(kv);
    hyp.validate();

    auto os = open_out(c.out, "plbound.csv");
    os << "modulus,theta,gamma,axis_bound,sector_bound,interpolated_bound,status\n";
    char buf[320];
    int failures = 0;
    for (double mod : moduli)
        for (double theta : thetas) {
            const fsk::ComplexTime z(mod, theta);
            const double gamma = fsk::gamma_eps(epsilon, theta);
            const double axis = hyp.axis_bound(mod);
            const double sector = hyp.sector_bound(z);
            const double interp = fsk::pl_bound(hyp, z, epsilon);
            const bool ok = std::isfinite(interp) && interp <= sector * (1.0 + 1e-12);
            if (!ok) ++failures;
            std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%s\n", mod,
                          theta, gamma, axis, sector, interp, ok ? "pass" : "fail");
            os << buf;
        }
    std::printf("plbound: %zu rows -> %s\n", moduli.size() * thetas.size(),
                failures == 0 ? "PASS" : "FAIL");
    return failures == 0 ? 0 : 1;
}

// Dyadic annulus profile fit on a kernel matrix, either loaded from a file
// written by save_kernel_matrix (key: kernel) or synthesized as a free
// semigroup kernel from grid keys (alpha, d, grid_n, grid_box, theta, modulus).
int run_dgprofile_cmd(const CommonArgs& c) {
    auto kv = fsk::KeyValueFile::parse_file(c.config);
    const bool stored = kv.has("kernel");
    const std::string kernel_path = stored ? kv.get_string("kernel") : std::string();
    double alpha = 1.0;
    fsk::GridSpec grid{1, 1024, 96.0};
    fsk::ComplexTime z(1.0, 0.0);
    if (!stored) {
        alpha = kv.get_double("alpha", 1.0);
        grid.d = static_cast<int>(kv.get_uint("d", 1));
        grid.n = static_cast<int>(kv.get_uint("grid_n", 1024));
        grid.box_length = kv.get_double("grid_box", 96.0);
        grid.validate();
        z = fsk::ComplexTime(kv.get_double("modulus", 1.0), kv.get_double("theta", 0.0));
    }
    const double r = kv.get_double("r");
    fsk::DGParams params;
    params.p = kv.get_double("p", params.p);
    params.q = kv.get_double("q", params.q);
    params.sigma = kv.get_double("sigma", params.sigma);
    params.beta = kv.get_double("beta", params.beta);
    const std::string variant = kv.get_string("variant", "plain");
    if (variant == "plain")
        params.variant = fsk::DGVariant::plain;
    else if (variant == "restricted")
        params.variant = fsk::DGVariant::restricted;
    else if (variant == "dual")
        params.variant = fsk::DGVariant::dual;
    else
        throw fsk::ConfigError("variant must be plain, restricted, or dual",
                               kv.line_of("variant"), "variant");
    const double slope_tol = kv.get_double("slope_tol", 0.1);
    const bool has_x = kv.has("x");
    const std::uint64_t x_raw = kv.get_uint("x", 0);
    const bool has_kmax = kv.has("kmax");
    const std::uint64_t kmax_raw = kv.get_uint("kmax", 0);
    reject_unknown(kv);

    const fsk::KernelMatrix K =
        stored ? fsk::load_kernel_matrix(kernel_path)
               : fsk::semigroup_kernel(
                     fsk::build_operator(grid, alpha, fsk::PotentialSpec::zero(), false), z);
    params.validate(K.grid.d);
    const int x = has_x ? static_cast<int>(x_raw) : fsk::origin_node(K.grid);
    if (x < 0 || x >= K.size())
        throw fsk::ConfigError("x must index a grid node", kv.line_of("x"), "x");
    const int kmax = has_kmax ? static_cast<int>(kmax_raw) : fsk::max_annulus_index(K.grid, r);

    const fsk::DGReport rep = fsk::dg_profile(K, x, r, params, kmax, slope_tol);
    auto os = open_out(c.out, "dgprofile.txt");
    fsk::write_dg_report(os, rep);
    std::printf("dgprofile: C = %.6g, slope %.4f vs target %.4f (tol %.2f) -> %s\n",
                rep.fitted_CDG, rep.fitted_slope, rep.slope_target, slope_tol,
                rep.pass ? "PASS" : "FAIL");
    return rep.pass ? 0 : 1;
}

// Full experiment suite: CSV + JSON reports under the output directory,
// failing rows echoed to stderr.
int run_verify_cmd(const CommonArgs& c, const std::string& id_override) {
    fsk::ExperimentConfig cfg = fsk::load_config(c.config);
    if (!id_override.empty()) cfg.id = id_override;
    if (c.out_opt->count() > 0) cfg.outdir = c.out;
    if (c.seed_opt->count() > 0) cfg.seed = c.seed;

    const fsk::ExperimentResult res = fsk::run_experiment(cfg);
    fsk::emit_report(res, cfg.outdir, cfg.seed);

    int passc = 0, failc = 0, skipc = 0;
    for (const auto& row : res.rows) {
        if (row.skipped())
            ++skipc;
        else if (row.passed())
            ++passc;
        else {
            ++failc;
            std::fprintf(stderr, "FAIL %s %s lhs=%.6g rhs=%.6g\n", row.experiment.c_str(),
                         row.params.c_str(), row.lhs, row.rhs);
        }
    }
    std::printf("%s: %d pass, %d fail, %d skip -> %s\n", res.id.c_str(), passc, failc, skipc,
                res.pass ? "PASS" : "FAIL");
    std::printf("reports: %s/%s.csv, %s/%s_summary.json\n", cfg.outdir.c_str(), res.id.c_str(),
                cfg.outdir.c_str(), res.id.c_str());
    return res.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for fractional heat semigroups at complex time"};
    app.require_subcommand(1);

    CommonArgs kernel_args, plbound_args, dg_args, verify_args;
    std::string verify_id;

    CLI::App* kernel_cmd =
        app.add_subcommand("kernel", "evaluate the free kernel at query points");
    add_common(kernel_cmd, kernel_args);

    CLI::App* plbound_cmd =
        app.add_subcommand("plbound", "evaluate the sector interpolation bound");
    add_common(plbound_cmd, plbound_args);

    CLI::App* dg_cmd =
        app.add_subcommand("dgprofile", "fit a dyadic decay profile on a stored kernel");
    add_common(dg_cmd, dg_args);

    CLI::App* verify_cmd = app.add_subcommand("verify", "run a verification experiment suite");
    verify_cmd->add_option("experiment", verify_id,
                           "experiment id (overrides the id in the config)");
    add_common(verify_cmd, verify_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (kernel_cmd->parsed()) {
            openblas_set_num_threads(kernel_args.jobs);
            return run_kernel_cmd(kernel_args);
        }
        if (plbound_cmd->parsed()) {
            openblas_set_num_threads(plbound_args.jobs);
            return run_plbound_cmd(plbound_args);
        }
        if (dg_cmd->parsed()) {
            openblas_set_num_threads(dg_args.jobs);
            return run_dgprofile_cmd(dg_args);
        }
        openblas_set_num_threads(verify_args.jobs);
        return run_verify_cmd(verify_args, verify_id);
    } catch (const fsk::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
