#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "polarslit/montecarlo.hpp"

namespace polarslit {

namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 10000;

double gamma_prefactor(double a, double x) { return std::exp(-x + a * std::log(x) - std::lgamma(a)); }

// P(a, x) by its power series; converges quickly for x < a + 1.
double lower_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return sum * gamma_prefactor(a, x);
}

// Q(a, x) by its continued fraction (modified Lentz); for x >= a + 1.
double upper_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        double const an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double const del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return gamma_prefactor(a, x) * h;
}

struct Cell {
    double observed = 0.0;
    double expected = 0.0;
};

// Integral of samples y[lo..lo+sub] with spacing h.
double bin_mass(Eigen::ArrayXd const& y, Eigen::Index lo, Eigen::Index sub, double h) {
    if (sub % 2 == 0) {
        double s = y(lo) + y(lo + sub);
        for (Eigen::Index k = 1; k < sub; ++k) s += (k % 2 ? 4.0 : 2.0) * y(lo + k);
        return s * h / 3.0;
    }
    double s = 0.5 * (y(lo) + y(lo + sub));
    for (Eigen::Index k = 1; k < sub; ++k) s += y(lo + k);
    return s * h;
}

// Merges runs of adjacent bins until each cell expects at least 5 counts.
void append_merged(std::vector<Cell>& cells, CountArray const& observed, std::vector<double> const& expected) {
    constexpr double kMinExpected = 5.0;
    std::size_t const first = cells.size();
    Cell run;
    for (std::size_t b = 0; b < expected.size(); ++b) {
        run.observed += static_cast<double>(observed(static_cast<Eigen::Index>(b)));
        run.expected += expected[b];
        if (run.expected >= kMinExpected) {
            cells.push_back(run);
            run = {};
        }
    }
    if (run.expected > 0.0 || run.observed > 0.0) {
        if (cells.size() > first) {
            cells.back().observed += run.observed;
            cells.back().expected += run.expected;
        } else {
            cells.push_back(run);
        }
    }
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw std::domain_error("incomplete gamma needs a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - lower_series(a, x);
    return upper_fraction(a, x);
}

double chi_square_survival(double x, double dof) {
    if (!(dof > 0.0)) throw std::domain_error("chi-square needs dof > 0");
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult chi_square_against(IntensityProfile<double> const& profile, Histogram const& hist) {
    if (hist.n_transmitted <= 0) throw std::domain_error("empty histogram");
    auto const bins = static_cast<Eigen::Index>(hist.bins());
    if (bins < 1 || hist.edges.size() != bins + 1 || hist.counts_h.size() != bins) {
        throw std::domain_error("malformed histogram");
    }
    Eigen::Index const n = profile.size();
    double const span = hist.edges(bins) - hist.edges(0);
    double const tol = 1e-12 * span;
    if (n < 2 || (n - 1) % bins != 0 || std::abs(profile.xs(0) - hist.edges(0)) > tol ||
        std::abs(profile.xs(n - 1) - hist.edges(bins)) > tol) {
        throw std::domain_error("bin mismatch between profile grid and histogram");
    }
    Eigen::Index const sub = (n - 1) / bins;
    double const h = profile.step();

    std::vector<double> mass_v(static_cast<std::size_t>(bins));
    std::vector<double> mass_h(static_cast<std::size_t>(bins));
    double total = 0.0;
    for (Eigen::Index b = 0; b < bins; ++b) {
        mass_v[b] = bin_mass(profile.i_v, b * sub, sub, h);
        mass_h[b] = bin_mass(profile.i_h, b * sub, sub, h);
        total += mass_v[b] + mass_h[b];
    }
    if (!(total > 0.0)) throw std::domain_error("dark screen");

    double const n_tr = static_cast<double>(hist.n_transmitted);
    std::vector<Cell> cells;
    for (auto [mass, counts] : {std::pair{&mass_v, &hist.counts_v}, std::pair{&mass_h, &hist.counts_h}}) {
        std::vector<double> expected(mass->size());
        double sector_expected = 0.0;
        for (std::size_t b = 0; b < expected.size(); ++b) {
            expected[b] = n_tr * (*mass)[b] / total;
            sector_expected += expected[b];
        }
        if (sector_expected > 0.0) {
            append_merged(cells, *counts, expected);
        } else if (counts->sum() > 0) {
            // counts where the model puts no light at all
            return {std::numeric_limits<double>::infinity(), cells.size(), 0.0};
        }
    }

    ChiSquareResult r;
    for (auto const& c : cells) {
        double const diff = c.observed - c.expected;
        r.statistic += diff * diff / c.expected;
    }
    r.dof = cells.size() > 1 ? cells.size() - 1 : 0;
    r.p_value = r.dof > 0 ? chi_square_survival(r.statistic, static_cast<double>(r.dof)) : 1.0;
    return r;
}

}  // namespace polarslit
