// stripgram: Gram matrices of Dirichlet monomials on critical-strip
// rectangles, their Cholesky/orthonormalization machinery, L-series
// evaluation, and shift-recurrence scans, with cross-validation between the
// closed forms and quadrature oracles.

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stripgram/errors.hpp"
#include "stripgram/factorize.hpp"
#include "stripgram/kernel.hpp"
#include "stripgram/lfunc.hpp"
#include "stripgram/recurrence.hpp"
#include "stripgram/serialize.hpp"

using json = nlohmann::ordered_json;
using namespace stripgram;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerify = 4;

struct Options {
    double alpha = 0.6, beta = 0.8, gamma = 1.0;
    long modulus = 4;
    long char_index = 0;
    int order = 16;
    long precision = 256;
    double t = 1.0;
    double t_max = 200.0;
    double t_step = 0.05;
    bool one_sided = false;
    std::vector<double> epsilons;
    double tol = 1e-6;
    std::string format = "json";
    std::string output;
    int threads = 0;
    std::string method = "both";
    double sigma = 0.7, tau = 0.0;
};

json config_json(const Options& o, const std::string& subcommand) {
    json c;
    c["subcommand"] = subcommand;
    c["alpha"] = o.alpha;
    c["beta"] = o.beta;
    c["gamma"] = o.gamma;
    c["modulus"] = o.modulus;
    c["char_index"] = o.char_index;
    c["N"] = o.order;
    c["precision"] = o.precision;
    c["t"] = o.t;
    c["t_max"] = o.t_max;
    c["t_step"] = o.t_step;
    c["one_sided"] = o.one_sided;
    c["epsilons"] = o.epsilons;
    c["tol"] = o.tol;
    c["format"] = o.format;
    c["output"] = o.output;
    c["threads"] = o.threads;
    return c;
}

json envelope(const Options& o, const std::string& subcommand) {
    json j;
    j["format_version"] = kFormatVersion;
    j["tool"] = "stripgram";
    j["config"] = config_json(o, subcommand);
    return j;
}

void emit(const Options& o, const std::string& content) {
    if (o.output.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
    } else {
        atomic_write(o.output, content);
    }
}

Rectangle rect_of(const Options& o) { return make_rectangle(o.alpha, o.beta, o.gamma); }

DirichletCharacter character_of(const Options& o) {
    if (o.modulus < 1 || o.modulus > 1000000)
        throw std::invalid_argument("modulus must be in [1, 10^6]");
    const auto chars = characters_mod(o.modulus);
    if (o.char_index < 0 || o.char_index >= static_cast<long>(chars.size()))
        throw std::invalid_argument("char-index must be below phi(q) = " +
                                    std::to_string(chars.size()));
    return chars[static_cast<size_t>(o.char_index)];
}

void apply_threads(const Options& o) {
    int n = o.threads;
    if (n == 0) {
        if (const char* env = std::getenv("STRIPGRAM_THREADS")) n = std::atoi(env);
    }
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int cmd_gram(const Options& o) {
    const Rectangle rect = rect_of(o);
    const GramTruncation A = gram_matrix(rect, o.order, o.precision);
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "# stripgram gram format_version=" << kFormatVersion << " alpha=" << o.alpha
            << " beta=" << o.beta << " gamma=" << o.gamma << " N=" << o.order
            << " precision=" << o.precision << "\n";
        csv << "m,n,value\n";
        for (int m = 1; m <= o.order; ++m)
            for (int n = m; n <= o.order; ++n)
                csv << m << ',' << n << ',' << to_decimal(A.at(m, n)) << "\n";
        emit(o, csv.str());
        return 0;
    }
    json j = envelope(o, "gram");
    json entries = json::array();
    for (int m = 1; m <= o.order; ++m)
        for (int n = m; n <= o.order; ++n)
            entries.push_back({{"m", m}, {"n", n}, {"value", to_decimal(A.at(m, n))}});
    j["results"]["symmetric"] = true;
    j["results"]["entries"] = entries;
    emit(o, j.dump(2));
    return 0;
}

int cmd_cholesky(const Options& o) {
    const Rectangle rect = rect_of(o);
    const GramTruncation A = gram_matrix(rect, o.order, o.precision);
    const UpperFactor U = cholesky(A);
    const BigFloat resid = reconstruction_error(U, A);
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "# stripgram cholesky format_version=" << kFormatVersion << " alpha=" << o.alpha
            << " beta=" << o.beta << " gamma=" << o.gamma << " N=" << o.order
            << " precision=" << o.precision << " residual=" << to_decimal(resid) << "\n";
        csv << "row,col,value\n";
        for (int m = 1; m <= o.order; ++m)
            for (int n = m; n <= o.order; ++n)
                csv << m << ',' << n << ',' << to_decimal(U.at(m, n)) << "\n";
        emit(o, csv.str());
        return 0;
    }
    json j = envelope(o, "cholesky");
    json entries = json::array();
    for (int m = 1; m <= o.order; ++m)
        for (int n = m; n <= o.order; ++n)
            entries.push_back({{"row", m}, {"col", n}, {"value", to_decimal(U.at(m, n))}});
    j["results"]["scale"] = "gram_family";
    j["results"]["entries"] = entries;
    j["results"]["max_reconstruction_error"] = to_decimal(resid);
    emit(o, j.dump(2));
    return 0;
}

int cmd_basis(const Options& o) {
    const Rectangle rect = rect_of(o);
    const UpperFactor UK = u_matrix(rect, o.order, o.precision);
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "# stripgram basis format_version=" << kFormatVersion << " alpha=" << o.alpha
            << " beta=" << o.beta << " gamma=" << o.gamma << " N=" << o.order
            << " precision=" << o.precision << "\n";
        csv << "n,k,coefficient\n";
        for (int n = 1; n <= o.order; ++n) {
            const auto c = orthonormal_coeffs(UK, n);
            for (int k = 1; k <= n; ++k)
                csv << n << ',' << k << ',' << to_decimal(c[static_cast<size_t>(k - 1)]) << "\n";
        }
        emit(o, csv.str());
        return 0;
    }
    json j = envelope(o, "basis");
    json rows = json::array();
    for (int n = 1; n <= o.order; ++n) {
        const auto c = orthonormal_coeffs(UK, n);
        json coeffs = json::array();
        for (const auto& v : c) coeffs.push_back(to_decimal(v));
        rows.push_back({{"n", n}, {"coefficients", coeffs}});
    }
    j["results"]["basis"] = rows;
    emit(o, j.dump(2));
    return 0;
}

int cmd_lstar(const Options& o) {
    const auto chi = character_of(o);
    const std::complex<double> s(o.sigma, o.tau);
    const std::complex<double> v = lstar(chi, s, o.tol);
    json j = envelope(o, "lstar");
    j["config"]["sigma"] = o.sigma;
    j["config"]["tau"] = o.tau;
    j["results"]["re"] = v.real();
    j["results"]["im"] = v.imag();
    emit(o, j.dump(2));
    return 0;
}

int cmd_distance(const Options& o) {
    const Rectangle rect = rect_of(o);
    const auto chi = character_of(o);
    json j = envelope(o, "distance");
    j["config"]["method"] = o.method;

    double dq = 0.0, df = 0.0;
    const bool want_q = o.method == "both" || o.method == "quadratic-form";
    const bool want_f = o.method == "both" || o.method == "factor";
    if (want_q) {
        dq = distance(rect, chi, o.t, o.order, DistanceMethod::quadratic_form);
        j["results"]["quadratic_form"] = dq;
    }
    if (want_f) {
        DistanceOptions opts;
        opts.factor_precision = o.precision;
        df = distance(rect, chi, o.t, o.order, DistanceMethod::factor, opts);
        j["results"]["factor"] = df;
    }
    if (want_q && want_f) j["results"]["abs_difference"] = std::abs(dq - df);
    j["results"]["tail_bound"] = truncation_tail_bound(rect, chi, o.t, o.order);
    emit(o, j.dump(2));
    return 0;
}

int cmd_scan(const Options& o) {
    const Rectangle rect = rect_of(o);
    const auto chi = character_of(o);
    apply_threads(o);

    ScanConfig cfg;
    cfg.order = o.order;
    cfg.t_max = o.t_max;
    cfg.t_step = o.t_step;
    cfg.one_sided = o.one_sided;
    cfg.epsilons = o.epsilons;
    cfg.threads = o.threads;
    const ScanResult r = density_scan(rect, chi, cfg);

    json j = envelope(o, "scan");
    j["results"]["grid_points"] = r.grid.size();
    j["results"]["median_distance"] = r.median_distance;
    j["results"]["epsilons"] = r.epsilons;
    j["results"]["densities"] = r.densities;
    j["results"]["longest_runs"] = r.longest_runs;
    j["results"]["stabilization"] = {{"probe_ts", r.probe_ts},
                                     {"max_abs_diff_2N", r.stabilization_max_diff}};
    j["results"]["spot_checks"] = {{"count", r.spot_checks},
                                   {"order", r.spot_order},
                                   {"max_abs_diff", r.spot_max_diff}};
    j["results"]["tail_bound"] = r.tail_bound;
    j["results"]["distances"] = r.distances;
    j["results"]["grid"] = r.grid;

    if (o.output.empty()) {
        emit(o, j.dump(2));
        return 0;
    }
    atomic_write(o.output + ".json", j.dump(2));

    std::ostringstream trace;
    trace << "t,distance\n";
    for (size_t i = 0; i < r.grid.size(); ++i)
        trace << to_decimal(r.grid[i]) << ',' << to_decimal(r.distances[i]) << "\n";
    atomic_write(o.output + "_trace.csv", trace.str());

    std::ostringstream dens;
    dens << "epsilon,density,longest_run\n";
    for (size_t i = 0; i < r.epsilons.size(); ++i)
        dens << to_decimal(r.epsilons[i]) << ',' << to_decimal(r.densities[i]) << ','
             << r.longest_runs[i] << "\n";
    atomic_write(o.output + "_density.csv", dens.str());

    std::ostringstream plot;
    for (size_t i = 0; i < r.grid.size(); ++i)
        plot << to_decimal(r.grid[i]) << ' ' << to_decimal(r.distances[i]) << "\n";
    atomic_write(o.output + "_plot.dat", plot.str());
    return 0;
}

int cmd_verify(const Options& o) {
    const Rectangle rect = rect_of(o);
    apply_threads(o);
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": " << detail << "\n";
        if (!ok) all_ok = false;
    };

    {  // Gram entries against the quadrature oracle
        double worst = 0.0;
        for (int m = 1; m <= 12; ++m) {
            for (int n = m; n <= 12; ++n) {
                const auto q = inner_product(
                    rect, [m](std::complex<double> s) { return dirichlet_monomial(m, s); },
                    [n](std::complex<double> s) { return dirichlet_monomial(n, s); }, 1e-12);
                const double closed = 2.0 * gram_entry_d(rect, m, n);
                worst = std::max(worst, std::abs(q.value.real() - closed) /
                                            std::max(std::abs(closed), 1e-3));
            }
        }
        std::ostringstream d;
        d << "max relative gap " << worst << " (limit 1e-9), m,n <= 12";
        report("gram-vs-quadrature", worst <= 1e-9, d.str());
    }

    {  // Parseval on random finite sequences
        const UpperFactor UK = u_matrix(rect, 16, 256);
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int it = 0; it < 40; ++it) {
            FiniteSequence x;
            for (std::uint32_t k = 1; k <= 16; ++k) {
                double re, im;
                do {
                    re = u(rng);
                    im = u(rng);
                } while (re * re + im * im > 1.0);
                x.entries.push_back({k, {re, im}});
            }
            const double n2 = apply_uk_norm(UK, x) * apply_uk_norm(UK, x);
            auto fx = [&x](std::complex<double> s) {
                std::complex<double> acc = 0.0;
                for (const auto& e : x.entries) acc += e.value * dirichlet_monomial(e.index, s);
                return acc;
            };
            const auto q = inner_product(rect, fx, fx, 1e-12);
            worst = std::max(worst, std::abs(n2 - q.value.real()) /
                                        std::max(q.value.real(), 1e-6));
        }
        std::ostringstream d;
        d << "max relative gap " << worst << " (limit 1e-8), 40 sequences";
        report("parseval", worst <= 1e-8, d.str());
    }

    {  // orthonormality of e'_n under quadrature
        const UpperFactor UK = u_matrix(rect, 8, 256);
        double worst = 0.0;
        std::vector<std::vector<double>> coeffs;
        for (int n = 1; n <= 8; ++n) {
            const auto c = orthonormal_coeffs(UK, n);
            std::vector<double> cd(c.size());
            for (size_t i = 0; i < c.size(); ++i) cd[i] = c[i].to_double();
            coeffs.push_back(std::move(cd));
        }
        auto basis_fn = [&](int n) {
            return [&, n](std::complex<double> s) {
                std::complex<double> acc = 0.0;
                for (size_t k = 0; k < coeffs[n].size(); ++k)
                    acc += coeffs[n][k] * dirichlet_monomial(static_cast<std::uint64_t>(k + 1), s);
                return acc;
            };
        };
        for (int m = 0; m < 8; ++m) {
            for (int n = m; n < 8; ++n) {
                // tolerance sits above the ~1e-8 cancellation noise of the
                // large combination coefficients
                const auto q = inner_product(rect, basis_fn(m), basis_fn(n), 2e-7);
                const double target = m == n ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(q.value.real() - target));
            }
        }
        std::ostringstream d;
        d << "max deviation from delta_mn " << worst << " (limit 1e-6), m,n <= 8";
        report("orthonormality", worst <= 1e-6, d.str());
    }

    {  // truncated distance against the L-series quadrature route
        const auto chars = characters_mod(o.modulus);
        std::vector<const DirichletCharacter*> picks{&chars[0]};
        if (o.char_index > 0 && o.char_index < static_cast<long>(chars.size()))
            picks.push_back(&chars[static_cast<size_t>(o.char_index)]);
        else if (chars.size() > 1)
            picks.push_back(&chars[1]);
        double worst = 0.0;
        for (const auto* chi : picks) {
            for (double t : {0.5, 1.0, 2.0}) {
                const auto st = stabilized_distance(rect, *chi, t, 1024, 1e-3, 1 << 21);
                const double oracle = lstar_l2_distance(rect, *chi, t, 1e-4);
                worst = std::max(worst, std::abs(st.value - oracle));
            }
        }
        std::ostringstream d;
        d << "max |stabilized - quadrature| " << worst << " (limit 2e-3), t in {0.5, 1, 2}";
        report("distance-vs-lstar", worst <= 2e-3, d.str());
    }

    return all_ok ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gram matrices of Dirichlet monomials on strip rectangles: "
                 "factorization, L-series oracles, recurrence scans"};
    app.require_subcommand(1);
    Options o;

    auto add_rect = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", o.alpha, "left edge of the rectangle (1/2 < alpha < beta)");
        cmd->add_option("--beta", o.beta, "right edge of the rectangle (alpha < beta < 1)");
        cmd->add_option("--gamma", o.gamma, "half-height of the rectangle (> 0)");
    };
    auto add_char = [&](CLI::App* cmd) {
        cmd->add_option("--modulus", o.modulus, "character modulus q >= 1");
        cmd->add_option("--char-index", o.char_index, "canonical character index, < phi(q)");
    };
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "artifact format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--output", o.output, "output path (stdout when omitted)");
        cmd->add_option("--threads", o.threads,
                        "worker threads (0 = library default; STRIPGRAM_THREADS overrides)");
    };

    auto* gram = app.add_subcommand("gram", "emit the N x N Gram truncation");
    add_rect(gram);
    gram->add_option("--N", o.order, "truncation order")->required();
    gram->add_option("--precision", o.precision, "significand bits");
    add_out(gram);

    auto* chol = app.add_subcommand("cholesky", "emit the upper Cholesky factor and residual");
    add_rect(chol);
    chol->add_option("--N", o.order, "truncation order")->required();
    chol->add_option("--precision", o.precision, "significand bits");
    add_out(chol);

    auto* basis = app.add_subcommand("basis", "emit orthonormal-basis coefficients for n <= N");
    add_rect(basis);
    basis->add_option("--N", o.order, "basis size")->required();
    basis->add_option("--precision", o.precision, "significand bits");
    add_out(basis);

    auto* lst = app.add_subcommand("lstar", "evaluate the pole-free L-series surrogate");
    add_char(lst);
    lst->add_option("--sigma", o.sigma, "Re(s) > 0")->required();
    lst->add_option("--tau", o.tau, "Im(s)");
    lst->add_option("--tol", o.tol, "absolute error target");
    add_out(lst);

    auto* dist = app.add_subcommand("distance", "shift distance D_N(t) at a single t");
    add_rect(dist);
    add_char(dist);
    dist->add_option("--t", o.t, "shift")->required();
    dist->add_option("--N", o.order, "truncation order")->required();
    dist->add_option("--precision", o.precision, "factor-route significand bits");
    dist->add_option("--method", o.method, "factor | quadratic-form | both")
        ->check(CLI::IsMember({"factor", "quadratic-form", "both"}));
    add_out(dist);

    auto* scan = app.add_subcommand("scan", "distance trace and empirical densities over a t-grid");
    add_rect(scan);
    add_char(scan);
    scan->add_option("--N", o.order, "truncation order")->required();
    scan->add_option("--t-max", o.t_max, "grid endpoint T")->required();
    scan->add_option("--t-step", o.t_step, "grid step h")->required();
    scan->add_flag("--one-sided", o.one_sided, "scan [0, T] instead of [-T, T]");
    scan->add_option("--epsilons", o.epsilons,
                     "explicit epsilon ladder (default: fractions of the median)")
        ->delimiter(',');
    add_out(scan);

    auto* verify = app.add_subcommand("verify", "run the oracle cross-check suite");
    add_rect(verify);
    add_char(verify);
    verify->add_option("--threads", o.threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (gram->parsed()) return cmd_gram(o);
        if (chol->parsed()) return cmd_cholesky(o);
        if (basis->parsed()) return cmd_basis(o);
        if (lst->parsed()) return cmd_lstar(o);
        if (dist->parsed()) return cmd_distance(o);
        if (scan->parsed()) return cmd_scan(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "numerical breakdown: " << e.what()
                  << " (try doubling --precision)\n";
        return kExitNumerical;
    } catch (const StabilizationFailure& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const QuadratureNonConvergence& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const EvaluationFailure& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const PoleAtOne& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
