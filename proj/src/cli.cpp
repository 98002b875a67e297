#include "specgap/cli.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "specgap/bounds.hpp"
#include "specgap/errors.hpp"
#include "specgap/galerkin.hpp"
#include "specgap/io.hpp"
#include "specgap/model.hpp"
#include "specgap/spectral.hpp"
#include "specgap/steady.hpp"

namespace specgap {
namespace {

std::string join_g17(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) s += ',';
        s += g17(xs[i]);
    }
    return s;
}

// "lo:hi:n" -> n log-spaced points from lo to hi inclusive.
std::vector<double> parse_log_range(const std::string& text) {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
    char tail = '\0';
    const int got = std::sscanf(text.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &tail);
    if (got != 3 || n < 1 || !(lo > 0.0) || !(hi > 0.0)) {
        throw std::invalid_argument("expected lo:hi:n with lo,hi > 0 and n >= 1, got '" + text + "'");
    }
    std::vector<double> pts(static_cast<std::size_t>(n));
    if (n == 1) {
        pts[0] = lo;
        return pts;
    }
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        pts[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
    }
    pts.front() = lo;
    pts.back() = hi;
    return pts;
}

// "k,re,im" Fourier coefficient triples from the command line.
Potential make_potential(double U0, const std::vector<std::string>& coeffs) {
    if (coeffs.empty()) return Potential::cosine(U0);
    std::vector<std::pair<int, cplx>> terms;
    terms.reserve(coeffs.size());
    for (const std::string& c : coeffs) {
        int k = 0;
        double re = 0.0;
        double im = 0.0;
        char tail = '\0';
        const int got = std::sscanf(c.c_str(), "%d,%lf,%lf%c", &k, &re, &im, &tail);
        if (got != 3) {
            throw std::invalid_argument("expected k,re,im for --coeff, got '" + c + "'");
        }
        terms.emplace_back(k, cplx(re, im));
    }
    return Potential::from_fourier(terms);
}

int resolve_jobs(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("SPECGAP_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct GapOptions {
    double xi = 1.0;
    double tau = 0.0;
    double U0 = 0.0;
    double m = 1.0;
    double beta = 1.0;
    int K_start = 4;
    int K_max = 16;
    double rel_tol = 1e-3;
    std::vector<std::string> coeffs;
    std::string output;
};

int cmd_gap(const GapOptions& o, std::ostream& out) {
    ModelParams params;
    params.m = o.m;
    params.beta = o.beta;
    params.xi = o.xi;
    params.tau = o.tau;
    params.validate();
    const Potential pot = make_potential(o.U0, o.coeffs);
    const ConvergenceTrace res = converged_gap(params, pot, o.K_start, o.K_max, o.rel_tol);
    const int K_final = res.gaps.empty() ? o.K_start : res.gaps.back().first;
    out << "gap " << g17(res.final_gap) << " converged " << (res.converged ? 1 : 0) << " K "
        << K_final << " N " << 2 * K_final << '\n';
    if (!o.output.empty()) {
        const double u0_col =
            pot.is_cosine() ? pot.cosine_amplitude() : std::numeric_limits<double>::quiet_NaN();
        std::string csv = "# specgap gap xi=" + g17(o.xi) + " tau=" + g17(o.tau) +
                          " U0=" + g17(o.U0) + " m=" + g17(o.m) + " beta=" + g17(o.beta) +
                          " Kstart=" + std::to_string(o.K_start) +
                          " Kmax=" + std::to_string(o.K_max) + " rel_tol=" + g17(o.rel_tol) + "\n";
        csv += "xi,tau,U0,m,beta,K,N,gap,converged\n";
        csv += csv_row({g17(o.xi), g17(o.tau), g17(u0_col), g17(o.m), g17(o.beta),
                        std::to_string(K_final), std::to_string(2 * K_final), g17(res.final_gap),
                        res.converged ? "1" : "0"});
        write_text_file(o.output, csv);
    }
    return 0;
}

struct SweepOptions {
    std::vector<double> xi;
    std::string xi_log;
    std::vector<double> tau{0.0};
    std::vector<double> U0{0.0};
    double m = 1.0;
    double beta = 1.0;
    int K_start = 4;
    int K_max = 16;
    double rel_tol = 1e-3;
    int jobs = 0;
    std::string output = "sweep.csv";
};

std::vector<double> resolve_xi_list(const std::vector<double>& xi, const std::string& xi_log,
                                    const char* who) {
    if (!xi.empty() && !xi_log.empty()) {
        throw std::invalid_argument(std::string(who) + ": give either --xi or --xi-log, not both");
    }
    if (!xi.empty()) return xi;
    if (!xi_log.empty()) return parse_log_range(xi_log);
    throw std::invalid_argument(std::string(who) + ": one of --xi or --xi-log is required");
}

std::string sweep_csv(const std::string& comment, const std::vector<SweepRow>& rows) {
    std::string csv = comment;
    csv += "xi,tau,U0,m,beta,K,N,gap,converged\n";
    for (const SweepRow& r : rows) {
        csv += csv_row({g17(r.xi), g17(r.tau), g17(r.U0), g17(r.m), g17(r.beta),
                        std::to_string(r.K), std::to_string(r.N), g17(r.gap),
                        r.converged ? "1" : "0"});
    }
    return csv;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    const std::vector<double> xi = resolve_xi_list(o.xi, o.xi_log, "sweep");
    const int jobs = resolve_jobs(o.jobs);
    const std::vector<SweepRow> rows =
        sweep(xi, o.tau, o.U0, o.m, o.beta, o.K_start, o.K_max, o.rel_tol, jobs);
    std::size_t failures = 0;
    for (const SweepRow& r : rows) {
        if (r.failed) {
            ++failures;
            err << "sweep row xi=" << g17(r.xi) << " tau=" << g17(r.tau) << " U0=" << g17(r.U0)
                << " failed: " << r.error << '\n';
        }
    }
    const std::string comment = "# specgap sweep xi=" + join_g17(xi) + " tau=" + join_g17(o.tau) +
                                " U0=" + join_g17(o.U0) + " m=" + g17(o.m) +
                                " beta=" + g17(o.beta) + " Kstart=" + std::to_string(o.K_start) +
                                " Kmax=" + std::to_string(o.K_max) + " rel_tol=" + g17(o.rel_tol) +
                                "\n";
    write_text_file(o.output, sweep_csv(comment, rows));
    out << "sweep rows " << rows.size() << " failures " << failures << " output " << o.output
        << '\n';
    return (failures == rows.size() && !rows.empty()) ? 3 : 0;
}

struct SteadyOptions {
    std::vector<double> xi;
    std::vector<double> tau{0.0};
    std::vector<double> U0{0.0};
    double m = 1.0;
    double beta = 1.0;
    int K = 16;
    std::string output = "steady.csv";
};

int cmd_steady(const SteadyOptions& o, std::ostream& out, std::ostream& err) {
    if (o.xi.empty()) throw std::invalid_argument("steady: --xi is required");
    if (o.K < 1) throw std::invalid_argument("steady: --K must be >= 1");
    const std::string comment = "# specgap steady xi=" + join_g17(o.xi) +
                                " tau=" + join_g17(o.tau) + " U0=" + join_g17(o.U0) +
                                " m=" + g17(o.m) + " beta=" + g17(o.beta) +
                                " K=" + std::to_string(o.K) + "\n";
    std::string csv = comment;
    csv += "xi,tau,U0,K,v_tau,kinetic_moment,velocity_residual,energy_residual,fisher,"
           "fisher_available\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t failures = 0;
    std::size_t rows = 0;
    const BasisSpec basis(2 * o.K, o.K);
    for (double u0 : o.U0) {
        const Potential pot = Potential::cosine(u0);
        const ModeVector mass = mass_coefficients(pot, o.beta, o.K);
        for (double xi : o.xi) {
            for (double tau : o.tau) {
                ++rows;
                ModelParams params;
                params.m = o.m;
                params.beta = o.beta;
                params.xi = xi;
                params.tau = tau;
                double v = nan, kin = nan, res_v = nan, res_e = nan, fisher = nan;
                bool fisher_ok = false;
                try {
                    params.validate();
                    const GeneratorMatrix gen = assemble(params, pot, basis);
                    const SteadyState st = stationary_density(gen, pot);
                    v = mean_velocity(st, mass);
                    kin = kinetic_moment(st, mass);
                    const IdentityResiduals ir = identity_residuals(st, pot, mass);
                    res_v = ir.velocity;
                    res_e = ir.energy;
                    if (const auto f = fisher_information(st, pot, mass)) {
                        fisher = *f;
                        fisher_ok = true;
                    }
                } catch (const std::exception& e) {
                    ++failures;
                    err << "steady row xi=" << g17(xi) << " tau=" << g17(tau) << " U0=" << g17(u0)
                        << " failed: " << e.what() << '\n';
                }
                csv += csv_row({g17(xi), g17(tau), g17(u0), std::to_string(o.K), g17(v), g17(kin),
                                g17(res_v), g17(res_e), g17(fisher), fisher_ok ? "1" : "0"});
            }
        }
    }
    write_text_file(o.output, csv);
    out << "steady rows " << rows << " failures " << failures << " output " << o.output << '\n';
    return (failures == rows && rows > 0) ? 3 : 0;
}

struct BoundsOptions {
    std::vector<double> xi;
    std::string xi_log;
    std::vector<double> tau{0.0};
    double U0 = 0.0;
    double m = 1.0;
    double beta = 1.0;
    std::string scheme = "both";
    int K_start = 4;
    int K_max = 16;
    double rel_tol = 1e-3;
    int K_constants = 16;
    int jobs = 0;
    std::string output;
};

std::string bounds_csv(const std::string& comment, const std::vector<ValidationRow>& rows) {
    std::string csv = comment;
    csv += "xi,tau,scheme,a,eta,rate,feasible,gap,ok\n";
    for (const ValidationRow& r : rows) {
        csv += csv_row({g17(r.xi), g17(r.tau), scheme_name(r.scheme), g17(r.a), g17(r.eta),
                        g17(r.rate), r.feasible ? "1" : "0", g17(r.gap), r.ok ? "1" : "0"});
    }
    return csv;
}

std::vector<BoundScheme> parse_schemes(const std::string& scheme) {
    if (scheme == "h1") return {BoundScheme::h1_hypocoercive};
    if (scheme == "dms") return {BoundScheme::dms};
    if (scheme == "both") return {BoundScheme::h1_hypocoercive, BoundScheme::dms};
    throw std::invalid_argument("unknown scheme '" + scheme + "' (use h1, dms, or both)");
}

int cmd_bounds(const BoundsOptions& o, std::ostream& out, std::ostream& err, bool validate_mode) {
    const char* name = validate_mode ? "validate" : "bounds";
    const std::vector<double> xi = resolve_xi_list(o.xi, o.xi_log, name);
    const std::vector<BoundScheme> schemes = parse_schemes(o.scheme);
    const int jobs = resolve_jobs(o.jobs);
    const std::vector<SweepRow> gap_rows =
        sweep(xi, o.tau, {o.U0}, o.m, o.beta, o.K_start, o.K_max, o.rel_tol, jobs);
    for (const SweepRow& r : gap_rows) {
        if (r.failed) {
            err << name << " gap row xi=" << g17(r.xi) << " tau=" << g17(r.tau)
                << " failed: " << r.error << '\n';
        }
    }
    std::vector<ValidationRow> rows;
    for (BoundScheme s : schemes) {
        const std::vector<ValidationRow> part = validate_bounds(gap_rows, s, o.K_constants);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const std::string comment =
        std::string("# specgap ") + name + " xi=" + join_g17(xi) + " tau=" + join_g17(o.tau) +
        " U0=" + g17(o.U0) + " m=" + g17(o.m) + " beta=" + g17(o.beta) + " scheme=" + o.scheme +
        " Kstart=" + std::to_string(o.K_start) + " Kmax=" + std::to_string(o.K_max) +
        " rel_tol=" + g17(o.rel_tol) + " Kc=" + std::to_string(o.K_constants) + "\n";
    write_text_file(o.output, bounds_csv(comment, rows));
    if (!validate_mode) {
        out << "bounds rows " << rows.size() << " output " << o.output << '\n';
        return 0;
    }
    std::size_t violations = 0;
    for (const ValidationRow& r : rows) {
        if (!r.ok) {
            ++violations;
            err << "violation scheme=" << scheme_name(r.scheme) << " xi=" << g17(r.xi)
                << " tau=" << g17(r.tau) << " rate=" << g17(r.rate) << " gap=" << g17(r.gap)
                << '\n';
        }
    }
    out << "validate rows " << rows.size() << " violations " << violations << " output "
        << o.output << '\n';
    return violations > 0 ? 4 : 0;
}

int cmd_selfcheck(std::ostream& out) {
    bool all_ok = true;

    // Ladder identities for two parameter sets, quadrature vs closed form.
    {
        double worst = 0.0;
        worst = std::max(worst, hermite_ladder_check(BasisSpec(24, 1), 1.0, 1.0));
        worst = std::max(worst, hermite_ladder_check(BasisSpec(24, 1), 2.0, 0.5));
        const bool ok = worst <= 1e-8;
        all_ok = all_ok && ok;
        out << "selfcheck ladder max_residual " << g17(worst) << (ok ? " ok" : " FAIL") << '\n';
    }

    // Closed-form smallest eigenvalue of random symmetric 2x2 vs dense solver.
    {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const double a = unif(rng);
            const double b = unif(rng);
            const double c = unif(rng);
            Eigen::Matrix2d s;
            s << a, b / 2.0, b / 2.0, c;
            const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s);
            worst = std::max(worst, std::abs(lambda_min_2x2(a, b, c) - es.eigenvalues()(0)));
        }
        const bool ok = worst <= 1e-12;
        all_ok = all_ok && ok;
        out << "selfcheck lambda_min max_error " << g17(worst) << (ok ? " ok" : " FAIL") << '\n';
    }

    // Free-potential gaps against the exact min(xi/m, 1/(beta*xi)).
    {
        const Potential flat = Potential::cosine(0.0);
        double worst = 0.0;
        bool ok = true;
        for (double xi : {0.2, 0.5, 1.0, 2.0, 5.0}) {
            ModelParams params;
            params.xi = xi;
            const ConvergenceTrace res = converged_gap(params, flat, 4, 12, 1e-3);
            const double exact = kozlov_gap(xi, 1.0, 1.0);
            const double rel = std::abs(res.final_gap - exact) / exact;
            worst = std::max(worst, rel);
            ok = ok && res.converged && rel <= 1e-3;
        }
        all_ok = all_ok && ok;
        out << "selfcheck free_gap max_rel_error " << g17(worst) << (ok ? " ok" : " FAIL") << '\n';
    }

    out << "selfcheck " << (all_ok ? "ok" : "FAIL") << '\n';
    return all_ok ? 0 : 3;
}

void add_model_options(CLI::App* sub, double& m, double& beta) {
    sub->add_option("--m", m, "particle mass")->capture_default_str();
    sub->add_option("--beta", beta, "inverse temperature")->capture_default_str();
}

void add_resolution_options(CLI::App* sub, int& K_start, int& K_max, double& rel_tol) {
    sub->add_option("--Kstart", K_start, "initial Fourier cutoff")->capture_default_str();
    sub->add_option("--Kmax", K_max, "maximum Fourier cutoff")->capture_default_str();
    sub->add_option("--rel-tol", rel_tol, "relative convergence tolerance")->capture_default_str();
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"spectral gaps, stationary states, and decay-rate bounds for the "
                 "kinetic Langevin generator on a periodic potential"};
    app.require_subcommand(1);
    // Root-level option, given before the subcommand; explicit flags override
    // file values: specgap --config run.ini sweep
    app.set_config("--config", "", "read options from an INI file with [subcommand] sections");

    GapOptions g;
    CLI::App* sub_gap = app.add_subcommand("gap", "converged spectral gap at one parameter point");
    sub_gap->add_option("--xi", g.xi, "friction coefficient")->required();
    sub_gap->add_option("--tau", g.tau, "constant tilt force")->capture_default_str();
    sub_gap->add_option("--U0", g.U0, "cosine potential amplitude")->capture_default_str();
    sub_gap->add_option("--coeff", g.coeffs,
                        "potential Fourier coefficient k,re,im (repeatable; overrides --U0)");
    add_model_options(sub_gap, g.m, g.beta);
    add_resolution_options(sub_gap, g.K_start, g.K_max, g.rel_tol);
    sub_gap->add_option("--output", g.output, "optional CSV output path");

    SweepOptions s;
    CLI::App* sub_sweep = app.add_subcommand("sweep", "gap sweep over parameter grids, CSV output");
    auto* sweep_xi = sub_sweep->add_option("--xi", s.xi, "friction values")->delimiter(',');
    auto* sweep_xilog =
        sub_sweep->add_option("--xi-log", s.xi_log, "log-spaced friction range lo:hi:n");
    sweep_xi->excludes(sweep_xilog);
    sub_sweep->add_option("--tau", s.tau, "tilt values")->delimiter(',')->capture_default_str();
    sub_sweep->add_option("--U0", s.U0, "cosine amplitudes")->delimiter(',')->capture_default_str();
    add_model_options(sub_sweep, s.m, s.beta);
    add_resolution_options(sub_sweep, s.K_start, s.K_max, s.rel_tol);
    sub_sweep->add_option("--jobs", s.jobs, "worker threads (0: SPECGAP_JOBS env, then cores)")
        ->capture_default_str();
    sub_sweep->add_option("--output", s.output, "CSV output path")->capture_default_str();

    SteadyOptions t;
    CLI::App* sub_steady =
        app.add_subcommand("steady", "stationary-state observables over parameter grids");
    sub_steady->add_option("--xi", t.xi, "friction values")->delimiter(',')->required();
    sub_steady->add_option("--tau", t.tau, "tilt values")->delimiter(',')->capture_default_str();
    sub_steady->add_option("--U0", t.U0, "cosine amplitudes")
        ->delimiter(',')
        ->capture_default_str();
    add_model_options(sub_steady, t.m, t.beta);
    sub_steady->add_option("--K", t.K, "Fourier cutoff (Hermite degree 2K)")->capture_default_str();
    sub_steady->add_option("--output", t.output, "CSV output path")->capture_default_str();

    BoundsOptions b;
    CLI::App* sub_bounds =
        app.add_subcommand("bounds", "hypocoercive decay-rate bounds next to computed gaps");
    auto* bounds_xi = sub_bounds->add_option("--xi", b.xi, "friction values")->delimiter(',');
    auto* bounds_xilog =
        sub_bounds->add_option("--xi-log", b.xi_log, "log-spaced friction range lo:hi:n");
    bounds_xi->excludes(bounds_xilog);
    sub_bounds->add_option("--tau", b.tau, "tilt values")->delimiter(',')->capture_default_str();
    sub_bounds->add_option("--U0", b.U0, "cosine amplitude")->capture_default_str();
    add_model_options(sub_bounds, b.m, b.beta);
    sub_bounds->add_option("--scheme", b.scheme, "bound scheme: h1, dms, or both")
        ->capture_default_str();
    add_resolution_options(sub_bounds, b.K_start, b.K_max, b.rel_tol);
    sub_bounds->add_option("--Kc", b.K_constants, "cutoff for bound constants")
        ->capture_default_str();
    sub_bounds->add_option("--jobs", b.jobs, "worker threads for the gap sweep")
        ->capture_default_str();
    b.output = "bounds.csv";
    sub_bounds->add_option("--output", b.output, "CSV output path")->capture_default_str();

    BoundsOptions v;
    CLI::App* sub_validate =
        app.add_subcommand("validate", "check that bounds never exceed computed gaps");
    auto* val_xi = sub_validate->add_option("--xi", v.xi, "friction values")->delimiter(',');
    auto* val_xilog =
        sub_validate->add_option("--xi-log", v.xi_log, "log-spaced friction range lo:hi:n");
    val_xi->excludes(val_xilog);
    sub_validate->add_option("--tau", v.tau, "tilt values")->delimiter(',')->capture_default_str();
    sub_validate->add_option("--U0", v.U0, "cosine amplitude")->capture_default_str();
    add_model_options(sub_validate, v.m, v.beta);
    sub_validate->add_option("--scheme", v.scheme, "bound scheme: h1, dms, or both")
        ->capture_default_str();
    add_resolution_options(sub_validate, v.K_start, v.K_max, v.rel_tol);
    sub_validate->add_option("--Kc", v.K_constants, "cutoff for bound constants")
        ->capture_default_str();
    sub_validate->add_option("--jobs", v.jobs, "worker threads for the gap sweep")
        ->capture_default_str();
    v.output = "validate.csv";
    sub_validate->add_option("--output", v.output, "CSV output path")->capture_default_str();

    CLI::App* sub_self =
        app.add_subcommand("selfcheck", "run built-in analytic consistency checks");

    for (CLI::App* sub : {sub_gap, sub_sweep, sub_steady, sub_bounds, sub_validate, sub_self}) {
        sub->configurable(true);  // allow [subcommand] sections in config files
    }

    int code = 0;
    sub_gap->callback([&] { code = cmd_gap(g, out); });
    sub_sweep->callback([&] { code = cmd_sweep(s, out, err); });
    sub_steady->callback([&] { code = cmd_steady(t, out, err); });
    sub_bounds->callback([&] { code = cmd_bounds(b, out, err, false); });
    sub_validate->callback([&] { code = cmd_bounds(v, out, err, true); });
    sub_self->callback([&] { code = cmd_selfcheck(out); });

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("specgap");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(argv_store.size());
    for (const std::string& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return code;
}

} // namespace specgap
