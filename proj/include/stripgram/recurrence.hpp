#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "stripgram/characters.hpp"
#include "stripgram/factorize.hpp"
#include "stripgram/rectangle.hpp"

namespace stripgram {

enum class DistanceMethod { factor, quadratic_form };

// Quadratic-form distance machine for one (rectangle, character, order):
// D(t) = sqrt(v^H G v) with v_k = chi-twist(k) (k^{it} - 1) over k <= N and
// G = (<e_m, e_n>) = 2A. Two contraction routes, identical to rounding:
//   - materialized: packed upper triangle of G in doubles, O(N^2) per t
//     (orders up to the materialization cap);
//   - node rule: v^H G v = integral over K of |sum v_k k^{-s}|^2, contracted
//     on a fixed Gauss-Legendre tensor grid sized for the oscillation of the
//     integrand, O(N * nodes) per t.
// Both run in double precision and are safe for concurrent distance() calls.
class GramFormEvaluator {
  public:
    GramFormEvaluator(const Rectangle& rect, const DirichletCharacter& chi, int order,
                      int materialize_cap = 4096);

    double distance(double t) const;
    int order() const { return order_; }
    bool materialized() const { return materialized_; }

    // same value on a refined node grid; the difference bounds the
    // contraction error of the node route (0 when materialized)
    double node_refinement_gap(double t) const;

  private:
    void build_vector(double t, std::vector<double>& re, std::vector<double>& im) const;
    double node_distance(double t, const std::vector<double>& sx, const std::vector<double>& sw,
                         const std::vector<double>& tx, const std::vector<double>& tw) const;

    Rectangle rect_;
    int order_;
    bool materialized_;
    std::vector<std::complex<double>> coeff_;  // chi(k) or (-1)^k, k = 1..N
    std::vector<double> log_k_;
    std::vector<double> packed_;  // upper triangle of G when materialized
    std::vector<double> sx_, sw_, tx_, tw_;      // base node rule
    std::vector<double> rsx_, rsw_, rtx_, rtw_;  // refined node rule
};

struct DistanceOptions {
    mpfr_prec_t factor_precision = 256;  // working precision of the factor route
    int materialize_cap = 4096;
};

// D_N(t) by the requested method. `factor` builds the order-N factor U_K at
// factor_precision and returns ||U_K v||_2 (NotPositiveDefinite propagates
// when that precision cannot factor order N); `quadratic_form` needs no
// factorization.
double distance(const Rectangle& rect, const DirichletCharacter& chi, double t, int order,
                DistanceMethod method, const DistanceOptions& opts = {});

// Factor-route distance against a prebuilt U_K (amortizes the factorization).
double distance_with_factor(const UpperFactor& UK, const DirichletCharacter& chi, double t);

struct StabilizedDistance {
    double value;
    int n_used;
};

// Doubles the truncation order from n0 until |D_{2N} - D_N| <=
// rel_tol * max(D_{2N}, 1e-12), or throws StabilizationFailure at n_max.
StabilizedDistance stabilized_distance(const Rectangle& rect, const DirichletCharacter& chi,
                                       double t, int n0, double rel_tol, int n_max);

// Rigorous but pessimistic partial-summation tail bound
// B (1 + |t| log N) (1 + |s|/alpha) N^{-alpha}; reported for transparency,
// never used as the stopping rule.
double truncation_tail_bound(const Rectangle& rect, const DirichletCharacter& chi, double t,
                             int order);

struct ScanConfig {
    int order = 4096;
    double t_max = 200.0;  // grid is [-t_max, t_max]
    double t_step = 0.05;
    bool one_sided = false;  // [0, t_max] instead; never the default
    // explicit ladder; when empty, the ladder is median_fractions * median(D)
    std::vector<double> epsilons;
    std::vector<double> median_fractions = {0.01, 0.05, 0.10, 0.25, 0.50, 0.75, 1.0, 1.5, 2.0};
    int stabilization_probes = 9;    // grid points checked at order 2N
    double spot_fraction = 0.01;     // share of grid points cross-checked by the factor route
    int spot_order = 128;            // truncation order of those spot checks
    mpfr_prec_t spot_precision = 2048;
    int materialize_cap = 4096;
    int threads = 0;  // 0 = library default
};

struct ScanResult {
    Rectangle rect;
    long modulus = 1;
    long char_index = 0;
    int order = 0;
    double t_max = 0.0, t_step = 0.0;

    std::vector<double> grid;
    std::vector<double> distances;

    std::vector<double> epsilons;
    std::vector<double> densities;     // fraction of grid points with D < eps
    std::vector<int> longest_runs;     // per eps, longest consecutive run below it
    double median_distance = 0.0;

    std::vector<double> probe_ts;      // stabilization probes
    double stabilization_max_diff = 0.0;

    int spot_checks = 0;
    int spot_order = 0;
    double spot_max_diff = 0.0;        // factor vs quadratic form at spot_order

    double tail_bound = 0.0;           // analytic bound at (order, max |t|)
};

ScanResult density_scan(const Rectangle& rect, const DirichletCharacter& chi,
                        const ScanConfig& config);

// Density table helper shared by the scan and its consumers: densities and
// longest runs are recomputable from a distance trace and a ladder.
void density_table(const std::vector<double>& distances, const std::vector<double>& epsilons,
                   std::vector<double>& densities, std::vector<int>& longest_runs);

}  // namespace stripgram
