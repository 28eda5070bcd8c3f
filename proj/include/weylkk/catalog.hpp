#pragma once

// Built-in exact geometries with closed-form jet components and declared
// sample domains, for the verification suites and the CLI.

#include <map>
#include <numbers>
#include <vector>

#include "weylkk/kaluza_klein.hpp"

namespace weylkk {

class catalog_error : public std::runtime_error {
public:
    explicit catalog_error(const std::string& what) : std::runtime_error(what) {}
};

enum class GeometryKind { metric3, metric4, kk_triple };

inline std::string to_string(GeometryKind k) {
    switch (k) {
        case GeometryKind::metric3: return "metric3";
        case GeometryKind::metric4: return "metric4";
        case GeometryKind::kk_triple: return "kk_triple";
    }
    return "?";
}

struct DomainInterval {
    std::string coord;
    double lo = -1.0, hi = 1.0;
};

struct GeometryEntry {
    std::string name;
    GeometryKind kind = GeometryKind::metric4;
    Signature signature = Signature::euclidean;
    std::map<std::string, double> params;
    std::vector<std::string> coords;
    std::vector<DomainInterval> domain;
    std::optional<MetricField> metric;  // metric3 / metric4
    std::optional<KKTriple> kk;         // kk_triple
    std::string provenance;

    // The KK triple of this entry: the stored one, or the reduction of the
    // 4-metric along axis 4.
    KKTriple reduction() const {
        if (kk) return *kk;
        if (kind != GeometryKind::metric4)
            throw catalog_error("entry '" + name + "' has no Kaluza-Klein reduction");
        return extract_kk(*metric, signature);
    }

    // The assembled 4-metric (for kk entries) or the stored one.
    MetricField metric4() const {
        if (metric && kind == GeometryKind::metric4) return *metric;
        if (kk) return assemble_kk(*kk);
        throw catalog_error("entry '" + name + "' is not 4-dimensional");
    }
};

namespace detail {

inline std::vector<Jet> chart_vars(const Point& p, int dim) {
    std::vector<Jet> v;
    for (int i = 0; i < dim; ++i) v.push_back(Jet::variable(i, p[i], dim, 3));
    return v;
}

inline double param_or(const std::map<std::string, double>& params, const std::string& k,
                       double dflt) {
    auto it = params.find(k);
    return it == params.end() ? dflt : it->second;
}

}  // namespace detail

inline GeometryEntry builtin(const std::string& name,
                             const std::map<std::string, double>& params = {}) {
    using detail::chart_vars;
    using detail::param_or;
    constexpr double pi = std::numbers::pi;
    GeometryEntry e;
    e.name = name;

    if (name == "flat_euclidean4" || name == "flat_lorentzian4") {
        const bool lor = name == "flat_lorentzian4";
        e.kind = GeometryKind::metric4;
        e.signature = lor ? Signature::lorentzian : Signature::euclidean;
        e.coords = {"x1", "x2", "x3", "x4"};
        for (const auto& c : e.coords) e.domain.push_back({c, -2.0, 2.0});
        MetricField m;
        m.dim = 4;
        m.signature = e.signature;
        m.name = name;
        m.components = [lor](const Point&) {
            Ten2 g = Ten2::zeros(4, 3);
            for (int i = 0; i < 4; ++i)
                g(i, i) = Jet::constant(i == 3 && lor ? -1.0 : 1.0, 4, 3);
            return g;
        };
        e.metric = m;
        e.provenance = "flat space, Cartesian chart";
        return e;
    }

    if (name == "flat_twisted4") {
        // flat R^4 in coordinates (r, theta, phi, tau) with the angle
        // twisted against tau: ds^2 = dr^2 + r^2 dth^2
        //   + r^2 sin^2 th (dphi + w dtau)^2 + dtau^2
        const double w = param_or(params, "omega", 0.3);
        e.kind = GeometryKind::metric4;
        e.signature = Signature::euclidean;
        e.params = {{"omega", w}};
        e.coords = {"r", "theta", "phi", "tau"};
        e.domain = {{"r", 0.5, 3.0}, {"theta", 0.3, pi - 0.3}, {"phi", 0.0, 6.28},
                    {"tau", -1.0, 1.0}};
        MetricField m;
        m.dim = 4;
        m.signature = Signature::euclidean;
        m.name = name;
        m.components = [w](const Point& p) {
            auto v = chart_vars(p, 4);
            Jet r = v[0], th = v[1];
            Jet rs2 = r * r * sin(th) * sin(th);
            Ten2 g = Ten2::zeros(4, 3);
            g(0, 0) = Jet::constant(1.0, 4, 3);
            g(1, 1) = r * r;
            g(2, 2) = rs2;
            g(2, 3) = w * rs2;
            g(3, 2) = g(2, 3);
            g(3, 3) = 1.0 + w * w * rs2;
            return g;
        };
        e.metric = m;
        e.provenance = "flat space, twisted angular chart (Weyl tensor vanishes)";
        return e;
    }

    if (name == "sphere3") {
        const double rho = param_or(params, "rho", 1.0);
        if (rho <= 0.0) throw catalog_error("sphere3 requires rho > 0");
        e.kind = GeometryKind::metric3;
        e.signature = Signature::euclidean;
        e.params = {{"rho", rho}};
        e.coords = {"chi", "theta", "phi"};
        e.domain = {{"chi", 0.3, pi - 0.3}, {"theta", 0.3, pi - 0.3}, {"phi", 0.0, 6.28}};
        MetricField m;
        m.dim = 3;
        m.signature = Signature::euclidean;
        m.name = name;
        m.components = [rho](const Point& p) {
            auto v = chart_vars(p, 3);
            Jet chi = v[0], th = v[1];
            Ten2 g = Ten2::zeros(3, 3);
            g(0, 0) = Jet::constant(rho * rho, 3, 3);
            g(1, 1) = rho * rho * sin(chi) * sin(chi);
            g(2, 2) = g(1, 1) * sin(th) * sin(th);
            return g;
        };
        e.metric = m;
        e.provenance = "round 3-sphere of radius rho (Einstein 3-metric)";
        return e;
    }

    if (name == "taub_nut") {
        // Gibbons-Hawking form: ds^2 = V^{-1}(dtau + a)^2 + V dx.dx with
        // V = 1 + m/r and monopole potential a_phi = m(1 - cos th);
        // as a KK triple: sigma = -1/2 ln V, g3 = V^2 flat, a as above.
        const double mm = param_or(params, "m", 1.0);
        if (mm <= 0.0) throw catalog_error("taub_nut requires m > 0");
        e.kind = GeometryKind::kk_triple;
        e.signature = Signature::euclidean;
        e.params = {{"m", mm}};
        e.coords = {"r", "theta", "phi"};
        e.domain = {{"r", 0.5, 5.0}, {"theta", 0.3, pi - 0.3}, {"phi", 0.0, 6.28}};
        KKTriple kk;
        kk.reduction_signature = Signature::euclidean;
        kk.sigma = [mm](const Point& p) {
            Jet r = Jet::variable(0, p[0], 3, 3);
            return -0.5 * log(1.0 + mm / r);
        };
        kk.a = [mm](const Point& p) {
            Jet th = Jet::variable(1, p[1], 3, 3);
            Ten1 a = Ten1::zeros(3, 3);
            a(2) = mm * (1.0 - cos(th));
            return a;
        };
        kk.g3.dim = 3;
        kk.g3.signature = Signature::euclidean;
        kk.g3.name = "taub_nut_g3";
        kk.g3.components = [mm](const Point& p) {
            auto v = chart_vars(p, 3);
            Jet r = v[0], th = v[1];
            Jet V = 1.0 + mm / r;
            Jet V2 = V * V;
            Ten2 g = Ten2::zeros(3, 3);
            g(0, 0) = V2;
            g(1, 1) = V2 * r * r;
            g(2, 2) = V2 * r * r * sin(th) * sin(th);
            return g;
        };
        e.kk = kk;
        e.provenance = "Taub-NUT instanton, Gibbons-Hawking chart, V = 1 + m/r";
        return e;
    }

    if (name == "schwarzschild") {
        const double M = param_or(params, "M", 1.0);
        if (M <= 0.0) throw catalog_error("schwarzschild requires M > 0");
        e.kind = GeometryKind::metric4;
        e.signature = Signature::lorentzian;
        e.params = {{"M", M}};
        e.coords = {"r", "theta", "phi", "t"};
        e.domain = {{"r", 3.0 * M, 10.0 * M}, {"theta", 0.3, pi - 0.3},
                    {"phi", 0.0, 6.28}, {"t", -1.0, 1.0}};
        MetricField m;
        m.dim = 4;
        m.signature = Signature::lorentzian;
        m.name = name;
        m.components = [M](const Point& p) {
            auto v = chart_vars(p, 4);
            Jet r = v[0], th = v[1];
            Jet f = 1.0 - 2.0 * M / r;
            Ten2 g = Ten2::zeros(4, 3);
            g(0, 0) = 1.0 / f;
            g(1, 1) = r * r;
            g(2, 2) = r * r * sin(th) * sin(th);
            g(3, 3) = -f;
            return g;
        };
        e.metric = m;
        e.provenance = "Schwarzschild exterior, static chart, t last";
        return e;
    }

    if (name == "kerr") {
        const double M = param_or(params, "M", 1.0);
        const double a = param_or(params, "a", 0.6);
        if (M <= 0.0) throw catalog_error("kerr requires M > 0");
        if (std::abs(a) >= M)
            throw catalog_error("kerr requires |a| < M (got a = " + std::to_string(a) +
                                ", M = " + std::to_string(M) + ")");
        e.kind = GeometryKind::metric4;
        e.signature = Signature::lorentzian;
        e.params = {{"M", M}, {"a", a}};
        e.coords = {"r", "theta", "phi", "t"};
        // stay outside the ergoregion so the reduction along d_t applies
        e.domain = {{"r", 2.5 * M, 10.0 * M}, {"theta", 0.3, pi - 0.3},
                    {"phi", 0.0, 6.28}, {"t", -1.0, 1.0}};
        MetricField m;
        m.dim = 4;
        m.signature = Signature::lorentzian;
        m.name = name;
        m.components = [M, a](const Point& p) {
            auto v = chart_vars(p, 4);
            Jet r = v[0], th = v[1];
            Jet s2 = sin(th) * sin(th);
            Jet cth = cos(th);
            Jet Sig = r * r + a * a * cth * cth;
            Jet Delta = r * r - 2.0 * M * r + a * a;
            Ten2 g = Ten2::zeros(4, 3);
            g(0, 0) = Sig / Delta;
            g(1, 1) = Sig;
            g(2, 2) = (r * r + a * a + 2.0 * M * a * a * r * s2 / Sig) * s2;
            g(3, 3) = -(1.0 - 2.0 * M * r / Sig);
            g(2, 3) = -2.0 * M * a * r * s2 / Sig;
            g(3, 2) = g(2, 3);
            return g;
        };
        e.metric = m;
        e.provenance = "Kerr exterior, Boyer-Lindquist chart, t last";
        return e;
    }

    if (name == "conformally_flat_kk") {
        // the Kaluza-Klein data of flat_twisted4, stored directly as a
        // triple: C = 0, so c and k vanish separately
        const double w = param_or(params, "omega", 0.3);
        e.kind = GeometryKind::kk_triple;
        e.signature = Signature::euclidean;
        e.params = {{"omega", w}};
        e.coords = {"r", "theta", "phi"};
        e.domain = {{"r", 0.5, 3.0}, {"theta", 0.3, pi - 0.3}, {"phi", 0.0, 6.28}};
        auto rs2_of = [w](const Point& p) {
            Jet r = Jet::variable(0, p[0], 3, 3);
            Jet th = Jet::variable(1, p[1], 3, 3);
            return r * r * sin(th) * sin(th);
        };
        KKTriple kk;
        kk.reduction_signature = Signature::euclidean;
        kk.sigma = [rs2_of, w](const Point& p) {
            return 0.5 * log(1.0 + w * w * rs2_of(p));
        };
        kk.a = [rs2_of, w](const Point& p) {
            Jet rs2 = rs2_of(p);
            Ten1 a = Ten1::zeros(3, 3);
            a(2) = w * rs2 / (1.0 + w * w * rs2);
            return a;
        };
        kk.g3.dim = 3;
        kk.g3.signature = Signature::euclidean;
        kk.g3.name = "conformally_flat_kk_g3";
        kk.g3.components = [rs2_of, w](const Point& p) {
            auto v = chart_vars(p, 3);
            Jet r = v[0];
            Jet rs2 = rs2_of(p);
            Jet u = 1.0 + w * w * rs2;
            Ten2 g = Ten2::zeros(3, 3);
            g(0, 0) = 1.0 / u;
            g(1, 1) = r * r / u;
            g(2, 2) = rs2 / (u * u);
            return g;
        };
        e.kk = kk;
        e.provenance = "flat twisted chart reduced along d_tau (conformally flat)";
        return e;
    }

    throw catalog_error("unknown geometry '" + name + "'");
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {
        "flat_euclidean4", "flat_lorentzian4", "flat_twisted4", "sphere3",
        "taub_nut",        "schwarzschild",    "kerr",          "conformally_flat_kk"};
    return names;
}

}  // namespace weylkk
