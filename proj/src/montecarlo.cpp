#include "polarslit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "polarslit/philox.hpp"

namespace polarslit {

void ScreenWindow::validate() const {
    if (!(std::isfinite(half_width) && half_width > 0.0)) {
        throw std::domain_error("window half_width must be > 0");
    }
    if (bins < 1) throw std::domain_error("histogram needs at least one bin");
}

bool Histogram::operator==(Histogram const& o) const {
    return n_emitted == o.n_emitted && n_transmitted == o.n_transmitted && seed == o.seed &&
           edges.size() == o.edges.size() && (edges == o.edges).all() &&
           counts_v.size() == o.counts_v.size() && (counts_v == o.counts_v).all() &&
           counts_h.size() == o.counts_h.size() && (counts_h == o.counts_h).all();
}

PhotonSampler::PhotonSampler(ApparatusConfig<double> const& config, ScreenWindow const& window,
                             SamplerOptions const& options)
    : window_(window) {
    window.validate();
    config.geometry.validate();
    if (options.table_oversampling < 16) {
        throw std::domain_error("inverse-CDF table needs at least 16 cells per bin");
    }

    auto const amps = sector_amplitudes(config);
    transmission_ = polarslit::transmission(amps);

    std::size_t const cells = window.bins * options.table_oversampling;
    x0_ = -window.half_width;
    cell_ = 2.0 * window.half_width / static_cast<double>(cells);

    for (SectorTable* t : {&v_, &h_}) {
        t->density.resize(cells + 1);
        t->cdf.assign(cells + 1, 0.0);
    }
    for (std::size_t i = 0; i <= cells; ++i) {
        double const x = i == cells ? window.half_width : x0_ + cell_ * static_cast<double>(i);
        auto const s = intensity_at(amps, config.geometry, x, options.screen);
        v_.density[i] = s.v;
        h_.density[i] = s.h;
    }
    for (SectorTable* t : {&v_, &h_}) {
        for (std::size_t i = 0; i < cells; ++i) {
            t->cdf[i + 1] = t->cdf[i] + 0.5 * cell_ * (t->density[i] + t->density[i + 1]);
        }
        t->mass = t->cdf.back();
    }

    double const mass = v_.mass + h_.mass;
    if (transmission_ > 0.0 && !(mass > 0.0)) {
        throw std::domain_error("no transmitted light reaches the screen window");
    }
    p_v_ = mass > 0.0 ? v_.mass / mass : 0.0;
}

double PhotonSampler::invert(SectorTable const& t, double u) const {
    double const target = u * t.mass;
    auto const it = std::upper_bound(t.cdf.begin(), t.cdf.end(), target);
    std::size_t const cells = t.cdf.size() - 1;
    std::size_t i = it == t.cdf.begin() ? 0 : static_cast<std::size_t>(it - t.cdf.begin()) - 1;
    i = std::min(i, cells - 1);

    // mass over a fraction s of the cell: cell * (f0 s + (f1 - f0) s^2 / 2)
    double const f0 = t.density[i];
    double const f1 = t.density[i + 1];
    double const r = (target - t.cdf[i]) / cell_;
    double s = 0.0;
    if (r > 0.0) {
        double const disc = std::max(f0 * f0 + 2.0 * (f1 - f0) * r, 0.0);
        double const den = f0 + std::sqrt(disc);
        s = den > 0.0 ? 2.0 * r / den : 0.0;
    }
    s = std::clamp(s, 0.0, 1.0);
    double const x = x0_ + (static_cast<double>(i) + s) * cell_;
    return std::clamp(x, -window_.half_width, window_.half_width);
}

PhotonRecord PhotonSampler::draw(std::uint64_t seed, std::uint64_t index) const {
    std::uint64_t const batch = index / kBatchSize;
    std::uint64_t const within = index % kBatchSize;
    Philox4x32::Counter const ctr{static_cast<std::uint32_t>(within), 0u,
                                  static_cast<std::uint32_t>(batch),
                                  static_cast<std::uint32_t>(batch >> 32)};
    auto const out = Philox4x32::block(ctr, Philox4x32::key_from_seed(seed));

    PhotonRecord rec;
    if (!(uniform_from_u32(out[0]) < transmission_)) return rec;
    rec.transmitted = true;
    rec.sector = uniform_from_u32(out[1]) < p_v_ ? Sector::V : Sector::H;
    double const u = uniform_from_u64(out[2], out[3]);
    rec.x = invert(rec.sector == Sector::V ? v_ : h_, u);
    return rec;
}

namespace {

struct BatchCounts {
    CountArray v;
    CountArray h;
    std::int64_t transmitted = 0;
};

}  // namespace

Histogram sample_photons(ApparatusConfig<double> const& config, ScreenWindow const& window,
                         std::int64_t n, std::uint64_t seed, SamplerOptions const& options) {
    if (n < 1) throw std::domain_error("photon count must be >= 1");
    PhotonSampler const sampler(config, window, options);

    auto const bins = static_cast<Eigen::Index>(window.bins);
    double const bw = window.bin_width();
    auto const total = static_cast<std::uint64_t>(n);
    std::uint64_t const n_batches = (total + kBatchSize - 1) / kBatchSize;

    std::vector<BatchCounts> partial(n_batches);
    auto run_batch = [&](std::uint64_t b) {
        BatchCounts& c = partial[b];
        c.v = CountArray::Zero(bins);
        c.h = CountArray::Zero(bins);
        std::uint64_t const end = std::min(total, (b + 1) * kBatchSize);
        for (std::uint64_t i = b * kBatchSize; i < end; ++i) {
            PhotonRecord const rec = sampler.draw(seed, i);
            if (!rec.transmitted) continue;
            auto bin = static_cast<Eigen::Index>(std::floor((rec.x + window.half_width) / bw));
            bin = std::clamp<Eigen::Index>(bin, 0, bins - 1);
            (rec.sector == Sector::V ? c.v : c.h)(bin) += 1;
            ++c.transmitted;
        }
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_batches));
    if (threads <= 1) {
        for (std::uint64_t b = 0; b < n_batches; ++b) run_batch(b);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::uint64_t b = t; b < n_batches; b += threads) run_batch(b);
            });
        }
    }

    Histogram hist;
    hist.edges.resize(bins + 1);
    for (Eigen::Index i = 0; i <= bins; ++i) hist.edges(i) = -window.half_width + bw * static_cast<double>(i);
    hist.edges(bins) = window.half_width;
    hist.counts_v = CountArray::Zero(bins);
    hist.counts_h = CountArray::Zero(bins);
    for (auto const& c : partial) {
        hist.counts_v += c.v;
        hist.counts_h += c.h;
        hist.n_transmitted += c.transmitted;
    }
    hist.n_emitted = n;
    hist.seed = seed;
    return hist;
}

}  // namespace polarslit
