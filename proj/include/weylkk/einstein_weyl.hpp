#pragma once

// Conformal (Weyl) connections on 3-geometries: compatibility with the
// conformal class, curvature of the connection, the traceless condition on
// its symmetrized Ricci tensor, conformal gauge transformations, the
// gauge-fixed system, and the constancy/Killing checks of the reduced
// geometry.

#include "weylkk/kaluza_klein.hpp"

namespace weylkk {

// A conformal 3-geometry: metric representative plus the potential covector
// that twists the compatible torsion-free connection.
struct WeylStructure {
    MetricField g3;
    std::function<Ten1(const Point&)> w;  // w_mu, dim-3 jets
};

// Everything derived from (g3, w) at one point.
struct WeylCurvature {
    CurvatureBundle b3;   // Levi-Civita data of g3
    Ten1 w_dn, w_up;      // w_mu, w^mu
    Jet w2;               // w_mu w^mu
    Jet div_w;            // d_mu w^mu (Levi-Civita divergence)
    Ten2 dw;              // d_m w_n (full covariant derivative, unsymmetrized)
    Ten3 connection;      // w^l_{mn}
    Ten4 curvature;       // r^k_{lmn} of the twisted connection
    Ten2 ricci;           // r^a_{man}; not symmetric in general
    Ten2 ricci_sym;       // symmetric part
    Jet scalar;           // g^{mn} ricci_{mn}
    Ten2 ricci_closed;    // closed-form expression for the symmetric part
    double two_path_deviation = 0.0;  // max |ricci_sym - ricci_closed|
};

inline Ten3 weyl_connection_from(const CurvatureBundle& b, const Ten1& w_dn,
                                 const Ten1& w_up) {
    const int dim = b.g.dim();
    Ten3 conn = Ten3::zeros(dim, b.g(0, 0).order());
    for (int l = 0; l < dim; ++l)
        for (int m = 0; m < dim; ++m)
            for (int n = 0; n < dim; ++n) {
                Jet s = b.gamma(l, m, n) + w_up(l) * b.g(m, n);
                if (l == n) s -= w_dn(m);
                if (l == m) s -= w_dn(n);
                conn(l, m, n) = s;
            }
    return conn;
}

inline WeylCurvature weyl_curvature(const WeylStructure& ws, const Point& p) {
    WeylCurvature wc;
    wc.b3 = curvature_bundle(ws.g3, p);
    const CurvatureBundle& b = wc.b3;
    wc.w_dn = ws.w(p);
    wc.w_up = Ten1::zeros(3, 3);
    for (int m = 0; m < 3; ++m) {
        Jet s = Jet::constant(0.0, 3, 3);
        for (int n = 0; n < 3; ++n) s += b.ginv(m, n) * wc.w_dn(n);
        wc.w_up(m) = s;
    }
    wc.w2 = Jet::constant(0.0, 3, 3);
    for (int m = 0; m < 3; ++m) wc.w2 += wc.w_up(m) * wc.w_dn(m);
    wc.div_w = covariant_divergence(b, wc.w_up);

    wc.dw = Ten2::zeros(3, 3);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
            Jet d = wc.w_dn(n).partial(m);
            for (int l = 0; l < 3; ++l) d -= b.gamma(l, m, n) * wc.w_dn(l);
            wc.dw(m, n) = d;
        }

    wc.connection = weyl_connection_from(b, wc.w_dn, wc.w_up);
    const Ten3& W = wc.connection;

    // same curvature formula as for the Levi-Civita connection, applied to
    // the twisted one
    wc.curvature = Ten4::zeros(3, 3);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n) {
                    Jet s = W(k, n, l).partial(m) - W(k, m, l).partial(n);
                    for (int q = 0; q < 3; ++q)
                        s += W(k, m, q) * W(q, n, l) - W(k, n, q) * W(q, m, l);
                    wc.curvature(k, l, m, n) = s;
                }

    wc.ricci = Ten2::zeros(3, 3);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
            Jet s = Jet::constant(0.0, 3, 3);
            for (int a = 0; a < 3; ++a) s += wc.curvature(a, m, a, n);
            wc.ricci(m, n) = s;
        }
    wc.ricci_sym = Ten2::zeros(3, 3);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            wc.ricci_sym(m, n) = 0.5 * (wc.ricci(m, n) + wc.ricci(n, m));
    {
        Jet s = Jet::constant(0.0, 3, 3);
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) s += b.ginv(m, n) * wc.ricci(m, n);
        wc.scalar = s;
    }

    // closed form for the symmetric part: ricci + d_(m w_n) + w w
    //   + g (div w - w^2)
    wc.ricci_closed = Ten2::zeros(3, 3);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
            Jet s = b.ricci(m, n) + 0.5 * (wc.dw(m, n) + wc.dw(n, m)) +
                    wc.w_dn(m) * wc.w_dn(n) + b.g(m, n) * (wc.div_w - wc.w2);
            wc.ricci_closed(m, n) = s;
            wc.two_path_deviation =
                std::max(wc.two_path_deviation,
                         std::abs(wc.ricci_sym(m, n).value() - s.value()));
        }
    return wc;
}

inline Ten3 weyl_connection(const WeylStructure& ws, const Point& p) {
    CurvatureBundle b = curvature_bundle(ws.g3, p);
    Ten1 w_dn = ws.w(p);
    Ten1 w_up = Ten1::zeros(3, 3);
    for (int m = 0; m < 3; ++m) {
        Jet s = Jet::constant(0.0, 3, 3);
        for (int n = 0; n < 3; ++n) s += b.ginv(m, n) * w_dn(n);
        w_up(m) = s;
    }
    return weyl_connection_from(b, w_dn, w_up);
}

// Residual of the compatibility condition: the twisted derivative of the
// metric must equal 2 w_l g_{mn}.
inline double compatibility_residual(const WeylStructure& ws, const Point& p) {
    CurvatureBundle b = curvature_bundle(ws.g3, p);
    Ten1 w_dn = ws.w(p);
    Ten1 w_up = Ten1::zeros(3, 3);
    for (int m = 0; m < 3; ++m) {
        Jet s = Jet::constant(0.0, 3, 3);
        for (int n = 0; n < 3; ++n) s += b.ginv(m, n) * w_dn(n);
        w_up(m) = s;
    }
    Ten3 W = weyl_connection_from(b, w_dn, w_up);
    double res = 0.0;
    for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) {
                Jet s = b.g(m, n).partial(l) - 2.0 * w_dn(l) * b.g(m, n);
                for (int q = 0; q < 3; ++q)
                    s -= W(q, l, m) * b.g(q, n) + W(q, l, n) * b.g(m, q);
                res = std::max(res, std::abs(s.value()));
            }
    return res;
}

// The traceless condition on the symmetrized Ricci of the twisted
// connection, written out in Levi-Civita quantities. Traceless by
// construction.
inline Ten2 ew_residual(const WeylStructure& ws, const Point& p) {
    WeylCurvature wc = weyl_curvature(ws, p);
    const CurvatureBundle& b = wc.b3;
    Ten2 res = Ten2::zeros(3, 3);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            res(m, n) = b.ricci(m, n) - (1.0 / 3.0) * b.g(m, n) * b.ricci_scalar +
                        0.5 * (wc.dw(m, n) + wc.dw(n, m)) -
                        (1.0 / 3.0) * b.g(m, n) * wc.div_w + wc.w_dn(m) * wc.w_dn(n) -
                        (1.0 / 3.0) * b.g(m, n) * wc.w2;
    return res;
}

// Conformal rescaling of the representative combined with the shift of the
// potential by the gradient of the same scalar; the twisted connection is
// invariant under this map.
inline WeylStructure gauge_transform(const WeylStructure& ws,
                                     const std::function<Jet(const Point&)>& sigma) {
    WeylStructure out;
    out.g3.dim = 3;
    out.g3.signature = ws.g3.signature;
    out.g3.name = ws.g3.name + "_rescaled";
    MetricField base = ws.g3;
    out.g3.components = [base, sigma](const Point& p) {
        Jet e2s = exp(2.0 * sigma(p));
        Ten2 g = base.eval(p);
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) g(m, n) = e2s * g(m, n);
        return g;
    };
    auto w = ws.w;
    out.w = [w, sigma](const Point& p) {
        Ten1 a = w(p);
        Jet s = sigma(p);
        for (int m = 0; m < 3; ++m) a(m) += s.partial(m);
        return a;
    };
    return out;
}

struct GauduchonResult {
    double residual = 0.0;  // difference of the two sides of the identity
    double div_w = 0.0;     // gauge scalar d_mu w^mu at the point
    double lhs = 0.0, rhs = 0.0;
};

// Pure differential identity obtained by contracting the symmetric Ricci
// condition with the gradient of the potential and moving everything under
// one divergence (uses the contracted Bianchi identity d^m r_{mn} = dr/2).
inline GauduchonResult gauduchon_identity(const WeylStructure& ws, const Point& p) {
    WeylCurvature wc = weyl_curvature(ws, p);
    const CurvatureBundle& b = wc.b3;

    const double r = b.ricci_scalar.value();
    const double w2 = wc.w2.value();
    const double divw = wc.div_w.value();
    const double lambda = (r + divw + w2) / 3.0;

    // d^m w^n with the first index raised
    double ricci_dw = 0.0, ww_dw = 0.0;
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
            double dmn_up = 0.0;  // d^m w^n
            for (int q = 0; q < 3; ++q)
                for (int s = 0; s < 3; ++s)
                    dmn_up += b.ginv(m, q).value() * b.ginv(n, s).value() *
                              wc.dw(q, s).value();
            ricci_dw += b.ricci(m, n).value() * dmn_up;
            ww_dw += wc.w_dn(m).value() * wc.w_dn(n).value() * dmn_up;
        }

    // divergence of x_m = r_{mn} w^n - 1/2 w_m r + 1/2 w_m w^2
    Ten1 x_up = Ten1::zeros(3, 3);
    for (int m = 0; m < 3; ++m) {
        Jet s = Jet::constant(0.0, 3, 3);
        for (int n = 0; n < 3; ++n) {
            Jet r_up_mn = Jet::constant(0.0, 3, 3);
            for (int q = 0; q < 3; ++q)
                for (int w = 0; w < 3; ++w)
                    r_up_mn += b.ginv(m, q) * b.ginv(n, w) * b.ricci(q, w);
            s += r_up_mn * wc.w_dn(n);
        }
        s += wc.w_up(m) * (0.5 * wc.w2 - 0.5 * b.ricci_scalar);
        x_up(m) = s;
    }
    const double div_x = covariant_divergence(b, x_up).value();

    GauduchonResult res;
    res.div_w = divw;
    res.lhs = lambda * divw - ricci_dw - ww_dw;
    res.rhs = (lambda - 0.5 * r + 0.5 * w2) * divw - div_x;
    res.residual = std::abs(res.lhs - res.rhs);
    return res;
}

struct GaugeFixedResult {
    double ew12_residual = 0.0;     // traceless Ricci + potential-squared part
    double killing_residual = 0.0;  // symmetrized covariant derivative of w
};

inline GaugeFixedResult gauge_fixed_check(const WeylStructure& ws,
                                          const std::vector<Point>& points) {
    GaugeFixedResult out;
    for (const Point& p : points) {
        WeylCurvature wc = weyl_curvature(ws, p);
        const CurvatureBundle& b = wc.b3;
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) {
                const double r12 =
                    b.ricci(m, n).value() -
                    b.g(m, n).value() * b.ricci_scalar.value() / 3.0 +
                    wc.w_dn(m).value() * wc.w_dn(n).value() -
                    b.g(m, n).value() * wc.w2.value() / 3.0;
                out.ew12_residual = std::max(out.ew12_residual, std::abs(r12));
                out.killing_residual =
                    std::max(out.killing_residual,
                             0.5 * std::abs(wc.dw(m, n).value() + wc.dw(n, m).value()));
            }
    }
    return out;
}

// The Weyl potential induced by a Kaluza-Klein reduction: w = -f (lowered).
// The sign is fixed by calibration: with it the traceless condition holds
// exactly on the self-dual instanton data.
inline WeylStructure weyl_structure_from_kk(const KKTriple& kk) {
    WeylStructure ws;
    ws.g3 = kk.g3;
    ws.w = [kk](const Point& p) {
        KKContext ctx = kk_context(kk, p);
        Ten1 w = ctx.f_dn;
        for (int m = 0; m < 3; ++m) w(m) = -1.0 * w(m);
        return w;
    };
    return ws;
}

struct ConstancyResult {
    double c_estimate = 0.0;     // mean of r - 5 f^2 over the points
    double spread = 0.0;         // max deviation from the mean
    double ew22_residual = 0.0;  // Killing residual of the second curl vector
};

inline ConstancyResult ew21_constancy(const KKTriple& kk, const std::vector<Point>& points) {
    ConstancyResult out;
    std::vector<double> vals;
    for (const Point& p : points) {
        KKContext ctx = kk_context(kk, p);
        const CurvatureBundle& b = ctx.b3;
        vals.push_back(b.ricci_scalar.value() - 5.0 * ctx.f2.value());

        Ten1 F = F_vector_from(ctx);
        Ten1 F_dn = Ten1::zeros(3, 3);
        for (int m = 0; m < 3; ++m) {
            Jet s = Jet::constant(0.0, 3, 3);
            for (int n = 0; n < 3; ++n) s += b.g(m, n) * F(n);
            F_dn(m) = s;
        }
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) {
                Jet d = 0.5 * (F_dn(n).partial(m) + F_dn(m).partial(n));
                for (int l = 0; l < 3; ++l) d -= b.gamma(l, m, n) * F_dn(l);
                out.ew22_residual = std::max(out.ew22_residual, std::abs(d.value()));
            }
    }
    if (!vals.empty()) {
        double sum = 0.0;
        for (double v : vals) sum += v;
        out.c_estimate = sum / static_cast<double>(vals.size());
        for (double v : vals)
            out.spread = std::max(out.spread, std::abs(v - out.c_estimate));
    }
    return out;
}

}  // namespace weylkk
