#pragma once

// Random smooth metric fields and scalar/covector fields for property tests.
// Perturbations are small trigonometric waves on top of the flat metric, so
// the fields stay invertible on the sample box.

#include <random>

#include "weylkk/metric.hpp"

namespace testsupport {

struct Wave {
    double amp;
    std::array<double, 4> k;
    double phase;
};

inline Wave random_wave(std::mt19937_64& rng, double amp) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Wave w;
    w.amp = amp * uni(rng);
    for (auto& kk : w.k) kk = uni(rng);
    w.phase = 3.0 * uni(rng);
    return w;
}

inline weylkk::Jet wave_eval(const Wave& w, const std::vector<weylkk::Jet>& x) {
    weylkk::Jet arg = weylkk::Jet::constant(w.phase, x[0].dim(), x[0].order());
    for (std::size_t i = 0; i < x.size(); ++i) arg += w.k[i] * x[i];
    return w.amp * sin(arg);
}

// dim-3 or dim-4 metric: flat (optionally Lorentzian, time axis last) plus
// O(amp) smooth symmetric perturbation.
inline weylkk::MetricField random_metric(std::mt19937_64& rng, int dim,
                                         weylkk::Signature sig, double amp = 0.15) {
    std::vector<std::vector<Wave>> waves(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            waves[static_cast<std::size_t>(i * dim + j)] = {random_wave(rng, amp),
                                                            random_wave(rng, amp)};
    weylkk::MetricField m;
    m.dim = dim;
    m.signature = sig;
    m.name = "random";
    const bool lor = sig == weylkk::Signature::lorentzian;
    m.components = [dim, lor, waves](const weylkk::Point& p) {
        std::vector<weylkk::Jet> x;
        for (int i = 0; i < dim; ++i) x.push_back(weylkk::Jet::variable(i, p[i], dim, 3));
        weylkk::Ten2 g = weylkk::Ten2::zeros(dim, 3);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                weylkk::Jet v = weylkk::Jet::constant(0.0, dim, 3);
                for (const auto& w : waves[static_cast<std::size_t>(i * dim + j)])
                    v += wave_eval(w, x);
                if (i == j) v += (lor && i == dim - 1) ? -1.0 : 1.0;
                g(i, j) = v;
                g(j, i) = v;
            }
        return g;
    };
    return m;
}

inline std::function<weylkk::Jet(const weylkk::Point&)> random_scalar_field(
    std::mt19937_64& rng, int dim, double amp = 0.3) {
    std::vector<Wave> waves = {random_wave(rng, amp), random_wave(rng, amp)};
    return [dim, waves](const weylkk::Point& p) {
        std::vector<weylkk::Jet> x;
        for (int i = 0; i < dim; ++i) x.push_back(weylkk::Jet::variable(i, p[i], dim, 3));
        weylkk::Jet v = weylkk::Jet::constant(0.0, dim, 3);
        for (const auto& w : waves) v += wave_eval(w, x);
        return v;
    };
}

inline std::function<weylkk::Ten1(const weylkk::Point&)> random_covector_field(
    std::mt19937_64& rng, int dim, double amp = 0.3) {
    std::vector<std::vector<Wave>> waves(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        waves[static_cast<std::size_t>(i)] = {random_wave(rng, amp), random_wave(rng, amp)};
    return [dim, waves](const weylkk::Point& p) {
        std::vector<weylkk::Jet> x;
        for (int i = 0; i < dim; ++i) x.push_back(weylkk::Jet::variable(i, p[i], dim, 3));
        weylkk::Ten1 a = weylkk::Ten1::zeros(dim, 3);
        for (int i = 0; i < dim; ++i) {
            weylkk::Jet v = weylkk::Jet::constant(0.0, dim, 3);
            for (const auto& w : waves[static_cast<std::size_t>(i)]) v += wave_eval(w, x);
            a(i) = v;
        }
        return a;
    };
}

inline weylkk::Point random_point(std::mt19937_64& rng, int dim, double half = 1.0) {
    std::uniform_real_distribution<double> uni(-half, half);
    weylkk::Point p;
    for (int i = 0; i < dim; ++i) p.push_back(uni(rng));
    return p;
}

}  // namespace testsupport
