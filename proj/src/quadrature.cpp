#include "stripgram/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <stack>

#include "stripgram/errors.hpp"

namespace stripgram {

namespace {

struct NodeWeight {
    double node, weight;
};

// 16-point Gauss-Legendre on [-1, 1].
constexpr NodeWeight kGL16[16] = {
    {-0.98940093499164994, 0.027152459411754037}, {-0.9445750230732326, 0.062253523938647706},
    {-0.86563120238783176, 0.095158511682492591}, {-0.755404408355003, 0.12462897125553403},
    {-0.61787624440264377, 0.14959598881657676},  {-0.45801677765722737, 0.16915651939500262},
    {-0.28160355077925892, 0.18260341504492361},  {-0.095012509837637454, 0.18945061045506859},
    {0.095012509837637454, 0.18945061045506859},  {0.28160355077925892, 0.18260341504492361},
    {0.45801677765722737, 0.16915651939500262},   {0.61787624440264377, 0.14959598881657676},
    {0.755404408355003, 0.12462897125553403},     {0.86563120238783176, 0.095158511682492591},
    {0.9445750230732326, 0.062253523938647706},   {0.98940093499164994, 0.027152459411754037}};

struct Panel {
    double s0, s1, t0, t1;
    std::complex<double> value;
    int depth;
};

std::complex<double> gl16_panel(const Integrand& f, double s0, double s1, double t0, double t1,
                                long& evals) {
    const double sc = 0.5 * (s1 - s0), sm = 0.5 * (s1 + s0);
    const double tc = 0.5 * (t1 - t0), tm = 0.5 * (t1 + t0);
    std::complex<double> acc = 0.0;
    for (const auto& [xs, ws] : kGL16) {
        const double sigma = sm + sc * xs;
        std::complex<double> row = 0.0;
        for (const auto& [xt, wt] : kGL16) {
            row += wt * f({sigma, tm + tc * xt});
        }
        acc += ws * row;
    }
    evals += 16 * 16;
    return acc * (sc * tc);
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

TensorRule::TensorRule(const Rectangle& box, int n_sigma, int n_tau) {
    std::vector<double> x, w;
    gauss_legendre(n_sigma, x, w);
    sx_.resize(n_sigma);
    sw_.resize(n_sigma);
    const double sc = 0.5 * (box.beta - box.alpha), sm = 0.5 * (box.beta + box.alpha);
    for (int i = 0; i < n_sigma; ++i) {
        sx_[i] = sm + sc * x[i];
        sw_[i] = sc * w[i];
    }
    gauss_legendre(n_tau, x, w);
    tx_.resize(n_tau);
    tw_.resize(n_tau);
    for (int j = 0; j < n_tau; ++j) {
        tx_[j] = box.gamma * x[j];
        tw_[j] = box.gamma * w[j];
    }
}

std::complex<double> TensorRule::integrate(const Integrand& f) const {
    std::complex<double> acc = 0.0;
    for (size_t i = 0; i < sx_.size(); ++i) {
        std::complex<double> row = 0.0;
        for (size_t j = 0; j < tx_.size(); ++j) {
            row += tw_[j] * f({sx_[i], tx_[j]});
        }
        acc += sw_[i] * row;
    }
    return acc;
}

QuadratureResult integrate_rectangle(const Integrand& f, const Rectangle& box, double tol,
                                     int max_depth) {
    const double total_area = box.area();
    constexpr long kMaxPanels = 40000;  // subdivision budget
    long evals = 0;
    long panels = 0;

    std::stack<Panel> work;
    Panel root{box.alpha, box.beta, -box.gamma, box.gamma, 0.0, 0};
    root.value = gl16_panel(f, root.s0, root.s1, root.t0, root.t1, evals);
    work.push(root);

    std::complex<double> total = 0.0;
    double err_total = 0.0;
    bool budget_exhausted = false;

    while (!work.empty()) {
        Panel p = work.top();
        work.pop();
        const double sm = 0.5 * (p.s0 + p.s1), tm = 0.5 * (p.t0 + p.t1);
        Panel child[4] = {{p.s0, sm, p.t0, tm, 0.0, p.depth + 1},
                          {sm, p.s1, p.t0, tm, 0.0, p.depth + 1},
                          {p.s0, sm, tm, p.t1, 0.0, p.depth + 1},
                          {sm, p.s1, tm, p.t1, 0.0, p.depth + 1}};
        std::complex<double> refined = 0.0;
        for (auto& c : child) {
            c.value = gl16_panel(f, c.s0, c.s1, c.t0, c.t1, evals);
            refined += c.value;
        }
        ++panels;
        const double est = std::abs(refined - p.value);
        const double area = (p.s1 - p.s0) * (p.t1 - p.t0);
        const double budget = tol * (area / total_area);
        if (est <= budget) {
            total += refined;
            err_total += est;
        } else if (p.depth >= max_depth || panels > kMaxPanels) {
            // out of budget: keep the refined value, count the unmet estimate
            total += refined;
            err_total += est;
            budget_exhausted = true;
        } else {
            for (auto& c : child) work.push(c);
        }
    }

    if (budget_exhausted && err_total > tol) throw QuadratureNonConvergence(tol, err_total);
    return {total, err_total, evals};
}

}  // namespace stripgram
