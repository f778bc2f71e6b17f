#include "stripgram/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stripgram/errors.hpp"
#include "stripgram/quadrature.hpp"

namespace stripgram {

namespace {

// Node counts sized for the integrand |sum_{k<=N} v_k k^{-s}|^2: in tau the
// fastest phase is 2 log N, in sigma the fastest decay is 2 log N per unit.
void node_counts(const Rectangle& rect, int order, int& n_sigma, int& n_tau) {
    const double lnN = std::log(std::max(2, order));
    n_sigma = static_cast<int>(std::ceil(rect.width() * lnN)) + 20;
    n_tau = static_cast<int>(std::ceil(rect.gamma * lnN)) + 24;
}

void scaled_rule(double a, double b, int n, std::vector<double>& x, std::vector<double>& w) {
    std::vector<double> x0, w0;
    gauss_legendre(n, x0, w0);
    x.resize(n);
    w.resize(n);
    const double c = 0.5 * (b - a), m = 0.5 * (b + a);
    for (int i = 0; i < n; ++i) {
        x[i] = m + c * x0[i];
        w[i] = c * w0[i];
    }
}

}  // namespace

GramFormEvaluator::GramFormEvaluator(const Rectangle& rect, const DirichletCharacter& chi,
                                     int order, int materialize_cap)
    : rect_(rect), order_(order) {
    validate(rect);
    if (order < 1) throw std::invalid_argument("distance requires N >= 1");

    coeff_.resize(static_cast<size_t>(order));
    log_k_.resize(static_cast<size_t>(order));
    for (int k = 1; k <= order; ++k) {
        coeff_[k - 1] = chi.principal() ? std::complex<double>(k % 2 ? -1.0 : 1.0)
                                        : chi.value(static_cast<std::uint64_t>(k));
        log_k_[k - 1] = std::log(static_cast<double>(k));
    }

    materialized_ = order <= materialize_cap;
    if (materialized_) {
        packed_.resize(static_cast<size_t>(order) * (order + 1) / 2);
#pragma omp parallel for schedule(dynamic, 16)
        for (int m = 1; m <= order; ++m) {
            size_t off = static_cast<size_t>(m - 1) * order -
                         static_cast<size_t>(m - 1) * m / 2 + (m - 1);
            for (int n = m; n <= order; ++n) {
                const double L = log_k_[m - 1] + log_k_[n - 1];
                const double radial = (m == 1 && n == 1)
                                          ? rect.width()
                                          : gram_radial_factor(rect.alpha, rect.beta, L);
                const double angular =
                    (m == n) ? rect.gamma
                             : gram_angular_factor(rect.gamma, log_k_[m - 1] - log_k_[n - 1]);
                packed_[off++] = 2.0 * radial * angular;
            }
        }
    } else {
        int ns, nt;
        node_counts(rect, order, ns, nt);
        scaled_rule(rect.alpha, rect.beta, ns, sx_, sw_);
        scaled_rule(-rect.gamma, rect.gamma, nt, tx_, tw_);
        scaled_rule(rect.alpha, rect.beta, ns + 8, rsx_, rsw_);
        scaled_rule(-rect.gamma, rect.gamma, nt + 12, rtx_, rtw_);
    }
}

void GramFormEvaluator::build_vector(double t, std::vector<double>& re,
                                     std::vector<double>& im) const {
    const size_t N = coeff_.size();
    re.resize(N);
    im.resize(N);
    for (size_t k = 0; k < N; ++k) {
        // v_k = c_k (k^{it} - 1)
        const double ph = t * log_k_[k];
        const std::complex<double> v = coeff_[k] * std::complex<double>(std::cos(ph) - 1.0,
                                                                        std::sin(ph));
        re[k] = v.real();
        im[k] = v.imag();
    }
}

double GramFormEvaluator::node_distance(double t, const std::vector<double>& sx,
                                        const std::vector<double>& sw,
                                        const std::vector<double>& tx,
                                        const std::vector<double>& tw) const {
    const size_t N = coeff_.size();
    const size_t ns = sx.size(), nt = tx.size();
    std::vector<double> fr(ns * nt, 0.0), fi(ns * nt, 0.0);
    std::vector<double> p(ns), zr(nt), zi(nt);
    for (size_t k = 0; k < N; ++k) {
        const std::complex<double> c = coeff_[k];
        if (c == 0.0) continue;
        const double L = log_k_[k];
        const double ph = t * L;
        const double vr = c.real() * (std::cos(ph) - 1.0) - c.imag() * std::sin(ph);
        const double vi = c.real() * std::sin(ph) + c.imag() * (std::cos(ph) - 1.0);
        if (vr == 0.0 && vi == 0.0) continue;
        for (size_t i = 0; i < ns; ++i) p[i] = std::exp(-sx[i] * L);
        for (size_t j = 0; j < nt; ++j) {
            zr[j] = std::cos(tx[j] * L);
            zi[j] = -std::sin(tx[j] * L);
        }
        for (size_t i = 0; i < ns; ++i) {
            const double ar = vr * p[i], ai = vi * p[i];
            double* frow = fr.data() + i * nt;
            double* irow = fi.data() + i * nt;
            for (size_t j = 0; j < nt; ++j) {
                frow[j] += ar * zr[j] - ai * zi[j];
                irow[j] += ar * zi[j] + ai * zr[j];
            }
        }
    }
    double acc = 0.0;
    for (size_t i = 0; i < ns; ++i) {
        double row = 0.0;
        const double* frow = fr.data() + i * nt;
        const double* irow = fi.data() + i * nt;
        for (size_t j = 0; j < nt; ++j) row += tw[j] * (frow[j] * frow[j] + irow[j] * irow[j]);
        acc += sw[i] * row;
    }
    return std::sqrt(std::max(0.0, acc));
}

double GramFormEvaluator::distance(double t) const {
    if (t == 0.0) return 0.0;
    if (!materialized_) return node_distance(t, sx_, sw_, tx_, tw_);

    const size_t N = coeff_.size();
    std::vector<double> a, b;
    build_vector(t, a, b);
    // v^H G v = a^T G a + b^T G b for real symmetric G
    double diag = 0.0, off = 0.0;
    const double* G = packed_.data();
    for (size_t m = 0; m < N; ++m) {
        const double* row = G + m * N - m * (m + 1) / 2 + m;
        diag += row[0] * (a[m] * a[m] + b[m] * b[m]);
        double ta = 0.0, tb = 0.0;
        for (size_t n = m + 1; n < N; ++n) {
            ta += row[n - m] * a[n];
            tb += row[n - m] * b[n];
        }
        off += a[m] * ta + b[m] * tb;
    }
    return std::sqrt(std::max(0.0, diag + 2.0 * off));
}

double GramFormEvaluator::node_refinement_gap(double t) const {
    if (materialized_) return 0.0;
    const double d0 = node_distance(t, sx_, sw_, tx_, tw_);
    const double d1 = node_distance(t, rsx_, rsw_, rtx_, rtw_);
    return std::abs(d1 - d0);
}

double distance(const Rectangle& rect, const DirichletCharacter& chi, double t, int order,
                DistanceMethod method, const DistanceOptions& opts) {
    if (method == DistanceMethod::quadratic_form) {
        return GramFormEvaluator(rect, chi, order, opts.materialize_cap).distance(t);
    }
    UpperFactor UK = u_matrix(rect, order, opts.factor_precision);
    return distance_with_factor(UK, chi, t);
}

double distance_with_factor(const UpperFactor& UK, const DirichletCharacter& chi, double t) {
    if (t == 0.0) return 0.0;
    const TwistedSequence shifted{chi, t}, base{chi, 0.0};
    const auto N = static_cast<std::uint32_t>(UK.order());
    const FiniteSequence v = truncated_vector(shifted, N) - truncated_vector(base, N);
    return apply_uk_norm(UK, v);
}

StabilizedDistance stabilized_distance(const Rectangle& rect, const DirichletCharacter& chi,
                                       double t, int n0, double rel_tol, int n_max) {
    if (n0 < 1 || !(rel_tol > 0.0)) throw std::invalid_argument("stabilized_distance: bad inputs");
    constexpr double kFloor = 1e-12;
    if (t == 0.0) return {0.0, n0};  // the difference vector vanishes at every order

    double prev = GramFormEvaluator(rect, chi, n0).distance(t);
    double before_prev = prev;
    int n = n0;
    while (n <= n_max / 2) {
        n *= 2;
        const double cur = GramFormEvaluator(rect, chi, n).distance(t);
        if (std::abs(cur - prev) <= rel_tol * std::max(cur, kFloor)) return {cur, n};
        before_prev = prev;
        prev = cur;
    }
    throw StabilizationFailure(prev, before_prev, n);
}

double truncation_tail_bound(const Rectangle& rect, const DirichletCharacter& chi, double t,
                             int order) {
    // coarse partial-sum bound for the twisted coefficients
    const double B = chi.principal() ? 2.0 : 2.0 * static_cast<double>(euler_phi(chi.modulus()));
    const double lnN = std::log(static_cast<double>(order));
    const double s_max = std::hypot(rect.beta, rect.gamma);
    return B * (1.0 + std::abs(t) * lnN) * (1.0 + s_max / rect.alpha) *
           std::pow(static_cast<double>(order), -rect.alpha);
}

void density_table(const std::vector<double>& distances, const std::vector<double>& epsilons,
                   std::vector<double>& densities, std::vector<int>& longest_runs) {
    densities.assign(epsilons.size(), 0.0);
    longest_runs.assign(epsilons.size(), 0);
    if (distances.empty()) return;
    for (size_t e = 0; e < epsilons.size(); ++e) {
        const double eps = epsilons[e];
        long below = 0;
        int run = 0, best = 0;
        for (double d : distances) {
            if (d < eps) {
                ++below;
                best = std::max(best, ++run);
            } else {
                run = 0;
            }
        }
        densities[e] = static_cast<double>(below) / static_cast<double>(distances.size());
        longest_runs[e] = best;
    }
}

ScanResult density_scan(const Rectangle& rect, const DirichletCharacter& chi,
                        const ScanConfig& config) {
    validate(rect);
    if (!(config.t_max > 0.0)) throw std::invalid_argument("scan requires T > 0");
    if (!(config.t_step > 0.0 && config.t_step <= config.t_max))
        throw std::invalid_argument("scan requires 0 < h <= T");
    for (size_t i = 0; i < config.epsilons.size(); ++i) {
        if (!(config.epsilons[i] > 0.0) ||
            (i > 0 && !(config.epsilons[i] > config.epsilons[i - 1])))
            throw std::invalid_argument("epsilon ladder must be strictly increasing and positive");
    }

    ScanResult out;
    out.rect = rect;
    out.modulus = chi.modulus();
    out.char_index = chi.index();
    out.order = config.order;
    out.t_max = config.t_max;
    out.t_step = config.t_step;

    const double t0 = config.one_sided ? 0.0 : -config.t_max;
    const long steps =
        static_cast<long>(std::floor((config.t_max - t0) / config.t_step + 1e-9));
    out.grid.resize(static_cast<size_t>(steps) + 1);
    for (long i = 0; i <= steps; ++i) out.grid[static_cast<size_t>(i)] = t0 + i * config.t_step;

    const GramFormEvaluator eval(rect, chi, config.order, config.materialize_cap);
    out.distances.assign(out.grid.size(), 0.0);
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
#endif
#pragma omp parallel for schedule(static)
    for (long i = 0; i <= steps; ++i)
        out.distances[static_cast<size_t>(i)] = eval.distance(out.grid[static_cast<size_t>(i)]);

    // epsilon ladder: explicit, or fractions of the observed median
    std::vector<double> sorted = out.distances;
    std::sort(sorted.begin(), sorted.end());
    out.median_distance = sorted[sorted.size() / 2];
    if (!config.epsilons.empty()) {
        out.epsilons = config.epsilons;
    } else {
        for (double f : config.median_fractions) out.epsilons.push_back(f * out.median_distance);
    }
    density_table(out.distances, out.epsilons, out.densities, out.longest_runs);

    // stabilization report: |D_{2N} - D_N| on a probe subset
    if (config.stabilization_probes > 0) {
        const GramFormEvaluator eval2(rect, chi, 2 * config.order, config.materialize_cap);
        const size_t count = std::min<size_t>(config.stabilization_probes, out.grid.size());
        for (size_t p = 0; p < count; ++p) {
            const size_t idx = (p + 1) * out.grid.size() / (count + 1);
            const double t = out.grid[idx];
            out.probe_ts.push_back(t);
            out.stabilization_max_diff = std::max(
                out.stabilization_max_diff, std::abs(eval2.distance(t) - eval.distance(t)));
        }
    }

    // factor-route spot checks, at a reduced order the working precision can
    // actually factor (full-order factorization is out of reach: the pivots
    // of this family decay by roughly a dozen bits per order)
    if (config.spot_fraction > 0.0 && config.spot_order > 0) {
        const int so = std::min(config.spot_order, config.order);
        const UpperFactor UK = u_matrix(rect, so, config.spot_precision);
        const GramFormEvaluator small(rect, chi, so, config.materialize_cap);
        const size_t stride =
            std::max<size_t>(1, static_cast<size_t>(std::llround(1.0 / config.spot_fraction)));
        out.spot_order = so;
        for (size_t i = 0; i < out.grid.size(); i += stride) {
            const double t = out.grid[i];
            const double df = distance_with_factor(UK, chi, t);
            const double dq = small.distance(t);
            out.spot_max_diff = std::max(out.spot_max_diff, std::abs(df - dq));
            ++out.spot_checks;
        }
    }

    out.tail_bound = truncation_tail_bound(rect, chi, config.t_max, config.order);
    return out;
}

}  // namespace stripgram
