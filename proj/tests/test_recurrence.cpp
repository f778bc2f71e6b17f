#include <doctest.h>

#include <cmath>
#include <random>

#include "stripgram/errors.hpp"
#include "stripgram/lfunc.hpp"
#include "stripgram/recurrence.hpp"

using namespace stripgram;

namespace {

const Rectangle kRect = make_rectangle(0.6, 0.8, 1.0);

}  // namespace

TEST_CASE("distance vanishes at t = 0 for every method") {
    const auto chars = characters_mod(4);
    for (const auto& chi : chars) {
        CHECK(distance(kRect, chi, 0.0, 64, DistanceMethod::quadratic_form) == 0.0);
        CHECK(distance(kRect, chi, 0.0, 8, DistanceMethod::factor) == 0.0);
    }
}

TEST_CASE("quadratic form matches the definition via truncated vectors") {
    // the evaluator's vectorized path against an explicit v^H G v contraction
    const auto chi = characters_mod(4)[1];
    const int N = 40;
    const double t = 1.37;
    const TwistedSequence shifted{chi, t}, base{chi, 0.0};
    const FiniteSequence v = truncated_vector(shifted, N) - truncated_vector(base, N);
    double direct = 0.0;
    for (const auto& em : v.entries)
        for (const auto& en : v.entries)
            direct += (std::conj(em.value) * en.value).real() * 2.0 *
                      gram_entry_d(kRect, em.index, en.index);
    const double d = distance(kRect, chi, t, N, DistanceMethod::quadratic_form);
    CHECK(d == doctest::Approx(std::sqrt(direct)).epsilon(1e-12));
}

TEST_CASE("even symmetry in t for real characters") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> tdist(-40.0, 40.0);
    const auto mod3 = characters_mod(3);
    const auto mod4 = characters_mod(4);
    for (const auto& chi : {mod3[1], mod4[0], mod4[1]}) {
        REQUIRE(chi.is_real());
        for (int it = 0; it < 100; ++it) {
            const double t = tdist(rng);
            const double dp = distance(kRect, chi, t, 128, DistanceMethod::quadratic_form);
            const double dm = distance(kRect, chi, -t, 128, DistanceMethod::quadratic_form);
            CHECK(std::abs(dp - dm) <= 1e-12 * (1.0 + dp));
        }
    }
}

TEST_CASE("factor and quadratic-form methods agree") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> tdist(-10.0, 10.0);
    const auto chars = characters_mod(5);  // includes complex-valued characters
    const int N = 24;
    DistanceOptions opts;
    opts.factor_precision = 512;  // covers the ~12.5 bits/order pivot decay at N = 24
    const UpperFactor UK = u_matrix(kRect, N, opts.factor_precision);
    for (int it = 0; it < 25; ++it) {
        const double t = tdist(rng);
        const auto& chi = chars[rng() % chars.size()];
        const double df = distance_with_factor(UK, chi, t);
        const double dq = distance(kRect, chi, t, N, DistanceMethod::quadratic_form);
        CHECK(std::abs(df - dq) <= 1e-10 * (1.0 + df));
    }
}

TEST_CASE("materialized and node-rule contractions agree") {
    const auto mod4 = characters_mod(4);
    const auto mod5 = characters_mod(5);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> tdist(-25.0, 25.0);
    for (const auto& chi : {mod4[0], mod4[1], mod5[1]}) {
        const int N = 512;
        const GramFormEvaluator direct(kRect, chi, N, /*materialize_cap=*/4096);
        const GramFormEvaluator nodes(kRect, chi, N, /*materialize_cap=*/1);
        REQUIRE(direct.materialized());
        REQUIRE(!nodes.materialized());
        for (int it = 0; it < 12; ++it) {
            const double t = tdist(rng);
            const double a = direct.distance(t);
            const double b = nodes.distance(t);
            CHECK(std::abs(a - b) <= 1e-11 * (1.0 + a));
            CHECK(nodes.node_refinement_gap(t) <= 1e-11 * (1.0 + b));
        }
    }
}

TEST_CASE("node rule stays accurate on a tall rectangle") {
    const Rectangle tall = make_rectangle(0.51, 0.99, 3.0);
    const auto chi = characters_mod(3)[1];
    const GramFormEvaluator direct(tall, chi, 700, 4096);
    const GramFormEvaluator nodes(tall, chi, 700, 1);
    for (double t : {0.3, 2.0, 17.0}) {
        CHECK(std::abs(direct.distance(t) - nodes.distance(t)) <=
              1e-11 * (1.0 + direct.distance(t)));
    }
}

TEST_CASE("stabilized distance: short-circuit, monotone N_used, failure mode") {
    const auto chi = characters_mod(4)[1];
    const auto zero = stabilized_distance(kRect, chi, 0.0, 32, 1e-3, 1 << 20);
    CHECK(zero.value == 0.0);
    CHECK(zero.n_used == 32);

    const auto tight = stabilized_distance(kRect, chi, 1.0, 256, 1e-3, 1 << 21);
    const auto loose = stabilized_distance(kRect, chi, 1.0, 256, 3e-2, 1 << 21);
    CHECK(loose.n_used <= tight.n_used);
    CHECK(std::abs(tight.value - loose.value) < 3e-2 * tight.value + 1e-6);

    CHECK_THROWS_AS(stabilized_distance(kRect, chi, 1.0, 16, 1e-9, 64), StabilizationFailure);
}

TEST_CASE("stabilized distance agrees with the quadrature oracle") {
    const auto chi = characters_mod(4)[1];
    const auto st = stabilized_distance(kRect, chi, 1.0, 1024, 1e-3, 1 << 21);
    const double oracle = lstar_l2_distance(kRect, chi, 1.0, 1e-4);
    CHECK(std::abs(st.value - oracle) <= 1e-3 * oracle + 2e-4);
}

TEST_CASE("analytic tail bound decays with N and reports finite values") {
    const auto chi = characters_mod(4)[1];
    const double b1 = truncation_tail_bound(kRect, chi, 2.0, 1 << 10);
    const double b2 = truncation_tail_bound(kRect, chi, 2.0, 1 << 12);
    CHECK(b2 < b1);
    CHECK(b1 > 0.0);
}

TEST_CASE("density table: trivial cases and monotonicity") {
    const std::vector<double> d{0.0, 0.5, 0.2, 0.7, 0.1, 0.3};
    std::vector<double> dens;
    std::vector<int> runs;
    density_table(d, {0.25, 0.6, 10.0}, dens, runs);
    CHECK(dens == std::vector<double>{3.0 / 6.0, 5.0 / 6.0, 1.0});
    CHECK(runs == std::vector<int>{1, 3, 6});
    for (size_t i = 1; i < dens.size(); ++i) CHECK(dens[i] >= dens[i - 1]);
}

TEST_CASE("density scan: small grid end to end") {
    const auto chi = characters_mod(4)[1];
    ScanConfig cfg;
    cfg.order = 256;
    cfg.t_max = 5.0;
    cfg.t_step = 0.25;
    cfg.stabilization_probes = 4;
    cfg.spot_fraction = 0.1;
    cfg.spot_order = 24;
    cfg.spot_precision = 512;
    const ScanResult r = density_scan(kRect, chi, cfg);

    REQUIRE(r.grid.size() == 41);
    CHECK(r.grid.front() == doctest::Approx(-5.0));
    CHECK(r.grid.back() == doctest::Approx(5.0));
    // t = 0 sits on the grid and carries an exact zero
    CHECK(r.distances[20] == 0.0);
    for (double d : r.distances) CHECK(d >= 0.0);

    REQUIRE(r.epsilons.size() == r.densities.size());
    for (size_t i = 0; i < r.densities.size(); ++i) {
        CHECK(r.densities[i] >= 0.0);
        CHECK(r.densities[i] <= 1.0);
        if (i > 0) {
            CHECK(r.epsilons[i] > r.epsilons[i - 1]);
            CHECK(r.densities[i] >= r.densities[i - 1]);
        }
    }

    // a rung above the observed maximum has density one
    const double top = *std::max_element(r.distances.begin(), r.distances.end());
    std::vector<double> dens;
    std::vector<int> runs;
    density_table(r.distances, {1.01 * top}, dens, runs);
    CHECK(dens[0] == 1.0);
    CHECK(runs[0] == static_cast<int>(r.grid.size()));

    // the run-length report is recomputable from the trace
    density_table(r.distances, r.epsilons, dens, runs);
    CHECK(dens == r.densities);
    CHECK(runs == r.longest_runs);

    // numeric audit trails came back populated
    CHECK(r.spot_checks > 0);
    CHECK(r.spot_max_diff <= 1e-10 * (1.0 + r.median_distance));
    CHECK(r.stabilization_max_diff < 0.05);
    CHECK(r.tail_bound > 0.0);

    // even symmetry of the grid for this real character
    for (size_t i = 0; i < r.grid.size(); ++i) {
        const size_t j = r.grid.size() - 1 - i;
        CHECK(std::abs(r.distances[i] - r.distances[j]) <= 1e-12 * (1.0 + r.distances[i]));
    }
}

TEST_CASE("scan validation failures") {
    const auto chi = characters_mod(4)[1];
    ScanConfig bad;
    bad.order = 64;
    bad.t_max = 1.0;
    bad.t_step = 0.5;
    bad.epsilons = {0.5, 0.25};  // not increasing
    CHECK_THROWS_AS(density_scan(kRect, chi, bad), std::invalid_argument);
    bad.epsilons = {-0.5, 0.25};
    CHECK_THROWS_AS(density_scan(kRect, chi, bad), std::invalid_argument);
    bad.epsilons.clear();
    bad.t_step = 2.0;  // h > T
    CHECK_THROWS_AS(density_scan(kRect, chi, bad), std::invalid_argument);
}
