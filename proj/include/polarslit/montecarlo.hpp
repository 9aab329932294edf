#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "polarslit/apparatus.hpp"
#include "polarslit/screenfield.hpp"

namespace polarslit {

using CountArray = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>;

struct PhotonRecord {
    bool transmitted = false;
    Sector sector = Sector::V;  // valid when transmitted
    double x = 0.0;             // [m], valid when transmitted

    bool operator==(PhotonRecord const&) const = default;
};

struct ScreenWindow {
    double half_width = 0.02;
    std::size_t bins = 100;

    void validate() const;
    double bin_width() const { return 2.0 * half_width / static_cast<double>(bins); }
};

struct Histogram {
    Eigen::ArrayXd edges;  // bins + 1 uniform edges
    CountArray counts_v;
    CountArray counts_h;
    std::int64_t n_emitted = 0;
    std::int64_t n_transmitted = 0;
    std::uint64_t seed = 0;

    std::size_t bins() const { return static_cast<std::size_t>(counts_v.size()); }

    bool operator==(Histogram const& o) const;
};

struct SamplerOptions {
    unsigned threads = 0;                      // 0: hardware concurrency
    std::size_t table_oversampling = 64;       // inverse-CDF cells per histogram bin
    ScreenOptions screen{};
};

/// Photons per RNG stream; stream b covers photon indices [b*kBatchSize, (b+1)*kBatchSize).
inline constexpr std::uint64_t kBatchSize = 1u << 16;

/**
 * Draws single photons from the analytic screen distribution of an apparatus.
 *
 * Each sector density is tabulated on a fine uniform grid and inverted with
 * piecewise-linear interpolation of the density, so the cell CDF is exact for
 * the tabulated trapezoids.
 */
class PhotonSampler {
public:
    PhotonSampler(ApparatusConfig<double> const& config, ScreenWindow const& window,
                  SamplerOptions const& options = {});

    /// Photon `index` of the run keyed by `seed`; a pure function of its arguments.
    PhotonRecord draw(std::uint64_t seed, std::uint64_t index) const;

    double transmission() const { return transmission_; }
    double probability_v() const { return p_v_; }
    ScreenWindow const& window() const { return window_; }

private:
    struct SectorTable {
        std::vector<double> density;  // at the table nodes
        std::vector<double> cdf;      // cumulative trapezoid mass at the nodes, cdf.back() = mass
        double mass = 0.0;
    };

    double invert(SectorTable const& t, double u) const;

    ScreenWindow window_;
    double transmission_ = 0.0;
    double p_v_ = 0.0;
    double x0_ = 0.0;
    double cell_ = 0.0;
    SectorTable v_;
    SectorTable h_;
};

/**
 * Samples `n` photons into a histogram over `window`.
 *
 * Bit-identical for identical (config, window, n, seed) at any thread count.
 */
Histogram sample_photons(ApparatusConfig<double> const& config, ScreenWindow const& window,
                         std::int64_t n, std::uint64_t seed, SamplerOptions const& options = {});

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/**
 * Pearson chi-square of a histogram's V and H counts against the analytic
 * profile. The profile grid must start and end on the histogram window and
 * put an integer number of grid steps in every bin. Adjacent bins are merged
 * until each expected count reaches 5.
 */
ChiSquareResult chi_square_against(IntensityProfile<double> const& profile, Histogram const& hist);

/// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

/// P(X > x) for X ~ chi-square with `dof` degrees of freedom.
double chi_square_survival(double x, double dof);

}  // namespace polarslit
