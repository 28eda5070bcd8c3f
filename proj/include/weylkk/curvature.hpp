#pragma once

// The curvature stack on a metric field: Christoffel, Riemann, Ricci,
// Schouten, Weyl, dual Weyl, epsilon tensors, curvature invariants,
// Chern-Simons current, covariant divergence. Everything is evaluated in jet
// arithmetic so each quantity carries its own derivatives at the point.

#include <utility>

#include "weylkk/metric.hpp"

namespace weylkk {

enum class Variance { up, down };

// Levi-Civita permutation sign of (i,j,k[,l]); 0 on repeats.
inline int perm_sign3(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    int s = 1;
    if (i > j) std::swap(i, j), s = -s;
    if (j > k) std::swap(j, k), s = -s;
    if (i > j) std::swap(i, j), s = -s;
    return s;
}
inline int perm_sign4(int a, int b, int c, int d) {
    int v[4] = {a, b, c, d};
    int s = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (v[i] == v[j]) return 0;
            if (v[i] > v[j]) std::swap(v[i], v[j]), s = -s;
        }
    return s;
}

struct CurvatureBundle {
    Point point;
    Ten2 g, ginv;
    Jet detg;
    Jet sqrt_abs_det;
    double det_sign = 1.0;  // sign of det g; the raised epsilon carries it
    Ten3 gamma;         // gamma(l,m,n) = Gamma^l_{mn}, jets carrying derivatives
    Ten4 riemann_ud;    // R^K_{LMN}
    Ten4 riemann_dddd;  // R_{KLMN}
    Ten2 ricci;
    Jet ricci_scalar;
    // dim-4 only:
    Ten2 schouten;
    Ten4 weyl_up;    // C^{KLMN}
    Ten4 weyl_down;  // C_{KLMN}
    Ten4 dual_weyl;  // *C^{ABMN}

    double max_curvature_scale() const {
        double m = riemann_dddd.max_abs_value();
        return std::max(m, 1e-300);
    }
};

// Gamma^l_{mn} = 1/2 g^{ls} (d_m g_{sn} + d_n g_{sm} - d_s g_{mn})
inline Ten3 christoffel_from(const Ten2& g, const Ten2& ginv, int dim, int order) {
    Ten3 gamma = Ten3::zeros(dim, order);
    Ten3 dg = Ten3::zeros(dim, order);  // dg(m, i, j) = d_m g_{ij}
    for (int m = 0; m < dim; ++m)
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) {
                Jet d = g(i, j).partial(m);
                dg(m, i, j) = d;
                dg(m, j, i) = d;
            }
    for (int l = 0; l < dim; ++l)
        for (int m = 0; m < dim; ++m)
            for (int n = m; n < dim; ++n) {
                Jet s = Jet::constant(0.0, dim, order);
                for (int k = 0; k < dim; ++k)
                    s += ginv(l, k) * (dg(m, k, n) + dg(n, k, m) - dg(k, m, n));
                s *= 0.5;
                gamma(l, m, n) = s;
                gamma(l, n, m) = s;
            }
    return gamma;
}

inline Ten3 christoffel(const MetricField& metric, const Point& p) {
    Ten2 g = metric.eval(p);
    Jet d = det(g);
    check_invertible(metric, p, g, d.value());
    return christoffel_from(g, inverse(g, d), metric.dim, 3);
}

inline CurvatureBundle curvature_bundle(const MetricField& metric, const Point& p) {
    const int dim = metric.dim;
    const int order = 3;
    CurvatureBundle b;
    b.point = p;
    b.g = metric.eval(p);
    b.detg = det(b.g);
    check_invertible(metric, p, b.g, b.detg.value());
    b.ginv = inverse(b.g, b.detg);
    b.det_sign = b.detg.value() > 0 ? 1.0 : -1.0;
    b.sqrt_abs_det = sqrt(b.det_sign * b.detg);
    b.gamma = christoffel_from(b.g, b.ginv, dim, order);

    // R^K_{LMN} = d_M G^K_{NL} - d_N G^K_{ML} + G^K_{MP} G^P_{NL} - G^K_{NP} G^P_{ML}
    b.riemann_ud = Ten4::zeros(dim, order);
    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l)
            for (int m = 0; m < dim; ++m)
                for (int n = m + 1; n < dim; ++n) {
                    Jet r = b.gamma(k, n, l).partial(m) - b.gamma(k, m, l).partial(n);
                    for (int q = 0; q < dim; ++q)
                        r += b.gamma(k, m, q) * b.gamma(q, n, l) -
                             b.gamma(k, n, q) * b.gamma(q, m, l);
                    b.riemann_ud(k, l, m, n) = r;
                    b.riemann_ud(k, l, n, m) = -r;
                }

    b.riemann_dddd = Ten4::zeros(dim, order);
    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l)
            for (int m = 0; m < dim; ++m)
                for (int n = m + 1; n < dim; ++n) {
                    Jet r = Jet::constant(0.0, dim, order);
                    for (int q = 0; q < dim; ++q) r += b.g(k, q) * b.riemann_ud(q, l, m, n);
                    b.riemann_dddd(k, l, m, n) = r;
                    b.riemann_dddd(k, l, n, m) = -r;
                }

    b.ricci = Ten2::zeros(dim, order);
    for (int m = 0; m < dim; ++m)
        for (int n = m; n < dim; ++n) {
            Jet r = Jet::constant(0.0, dim, order);
            for (int k = 0; k < dim; ++k) r += b.riemann_ud(k, m, k, n);
            b.ricci(m, n) = r;
            b.ricci(n, m) = r;
        }
    b.ricci_scalar = Jet::constant(0.0, dim, order);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) b.ricci_scalar += b.ginv(m, n) * b.ricci(m, n);

    if (dim == 4) {
        b.schouten = Ten2::zeros(dim, order);
        for (int m = 0; m < dim; ++m)
            for (int n = 0; n < dim; ++n)
                b.schouten(m, n) = b.ricci(m, n) - (1.0 / 6.0) * b.g(m, n) * b.ricci_scalar;

        // raise everything once: R^{KLMN} and S^{MN}
        Ten4 r_uu = Ten4::zeros(dim, order);  // R^{KL}_{MN}
        for (int k = 0; k < dim; ++k)
            for (int l = 0; l < dim; ++l)
                for (int m = 0; m < dim; ++m)
                    for (int n = m + 1; n < dim; ++n) {
                        Jet r = Jet::constant(0.0, dim, order);
                        for (int q = 0; q < dim; ++q)
                            r += b.ginv(l, q) * b.riemann_ud(k, q, m, n);
                        r_uu(k, l, m, n) = r;
                        r_uu(k, l, n, m) = -r;
                    }
        Ten4 r_uuuu = Ten4::zeros(dim, order);
        for (int k = 0; k < dim; ++k)
            for (int l = 0; l < dim; ++l)
                for (int m = 0; m < dim; ++m)
                    for (int n = m + 1; n < dim; ++n) {
                        Jet r = Jet::constant(0.0, dim, order);
                        for (int a = 0; a < dim; ++a)
                            for (int c = 0; c < dim; ++c)
                                r += b.ginv(m, a) * b.ginv(n, c) * r_uu(k, l, a, c);
                        r_uuuu(k, l, m, n) = r;
                        r_uuuu(k, l, n, m) = -r;
                    }
        Ten2 s_up = Ten2::zeros(dim, order);
        for (int m = 0; m < dim; ++m)
            for (int n = 0; n < dim; ++n) {
                Jet s = Jet::constant(0.0, dim, order);
                for (int a = 0; a < dim; ++a)
                    for (int c = 0; c < dim; ++c)
                        s += b.ginv(m, a) * b.ginv(n, c) * b.schouten(a, c);
                s_up(m, n) = s;
            }

        // C^{KLMN} = R^{KLMN} - g^{K[M}S^{N]L} + g^{L[M}S^{N]K},
        // antisymmetrization with weight 1/2
        b.weyl_up = Ten4::zeros(dim, order);
        for (int k = 0; k < dim; ++k)
            for (int l = 0; l < dim; ++l)
                for (int m = 0; m < dim; ++m)
                    for (int n = 0; n < dim; ++n)
                        b.weyl_up(k, l, m, n) =
                            r_uuuu(k, l, m, n) -
                            0.5 * (b.ginv(k, m) * s_up(n, l) - b.ginv(k, n) * s_up(m, l)) +
                            0.5 * (b.ginv(l, m) * s_up(n, k) - b.ginv(l, n) * s_up(m, k));

        b.weyl_down = Ten4::zeros(dim, order);
        Ten4 c_ud = Ten4::zeros(dim, order);  // C^{KL}_{MN} (lower last two)
        for (int k = 0; k < dim; ++k)
            for (int l = 0; l < dim; ++l)
                for (int m = 0; m < dim; ++m)
                    for (int n = 0; n < dim; ++n) {
                        Jet r = Jet::constant(0.0, dim, order);
                        for (int a = 0; a < dim; ++a)
                            for (int c = 0; c < dim; ++c)
                                r += b.g(m, a) * b.g(n, c) * b.weyl_up(k, l, a, c);
                        c_ud(k, l, m, n) = r;
                    }
        for (int k = 0; k < dim; ++k)
            for (int l = 0; l < dim; ++l)
                for (int m = 0; m < dim; ++m)
                    for (int n = 0; n < dim; ++n) {
                        Jet r = Jet::constant(0.0, dim, order);
                        for (int a = 0; a < dim; ++a)
                            for (int c = 0; c < dim; ++c)
                                r += b.g(k, a) * b.g(l, c) * c_ud(a, c, m, n);
                        b.weyl_down(k, l, m, n) = r;
                    }

        // *C^{ABMN} = 1/2 eps^{MNRS} C^{AB}_{RS}
        Jet inv_sqrt = b.det_sign / b.sqrt_abs_det;
        b.dual_weyl = Ten4::zeros(dim, order);
        for (int a = 0; a < dim; ++a)
            for (int c = 0; c < dim; ++c)
                for (int m = 0; m < dim; ++m)
                    for (int n = 0; n < dim; ++n) {
                        Jet r = Jet::constant(0.0, dim, order);
                        for (int rr = 0; rr < dim; ++rr)
                            for (int ss = 0; ss < dim; ++ss) {
                                int sgn = perm_sign4(m, n, rr, ss);
                                if (sgn == 0) continue;
                                r += (0.5 * sgn) * c_ud(a, c, rr, ss);
                            }
                        b.dual_weyl(a, c, m, n) = r * inv_sqrt;
                    }
    }
    return b;
}

// eps_{...} = perm * sqrt|g| (down); raising its indices with g^{-1} gives
// eps^{...} = sign(det g) * perm / sqrt|g| (up). Axis order x^1..x^dim,
// perm^{12..dim} = +1.
inline Ten3 epsilon_tensor3(const MetricField& metric, const Point& p, Variance v) {
    if (metric.dim != 3) throw dimension_error("epsilon_tensor3 requires dim 3");
    Ten2 g = metric.eval(p);
    Jet d = det(g);
    check_invertible(metric, p, g, d.value());
    const double sgn = d.value() > 0 ? 1.0 : -1.0;
    Jet s = sqrt(sgn * d);
    Jet f = v == Variance::up ? sgn / s : s;
    Ten3 e = Ten3::zeros(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                int sg = perm_sign3(i, j, k);
                if (sg) e(i, j, k) = static_cast<double>(sg) * f;
            }
    return e;
}

inline Ten4 epsilon_tensor4(const MetricField& metric, const Point& p, Variance v) {
    if (metric.dim != 4) throw dimension_error("epsilon_tensor4 requires dim 4");
    Ten2 g = metric.eval(p);
    Jet d = det(g);
    check_invertible(metric, p, g, d.value());
    const double sgn = d.value() > 0 ? 1.0 : -1.0;
    Jet s = sqrt(sgn * d);
    Jet f = v == Variance::up ? sgn / s : s;
    Ten4 e = Ten4::zeros(4, 3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    int sg = perm_sign4(i, j, k, l);
                    if (sg) e(i, j, k, l) = static_cast<double>(sg) * f;
                }
    return e;
}

// P = 1/2 *R^{ABCD} R_{ABCD} with *R^{ABCD} = 1/2 eps^{CDMN} R^{AB}_{MN},
// evaluated both from the Riemann tensor and from the Weyl tensor.
inline std::pair<double, double> pontryagin_full(const CurvatureBundle& b) {
    if (b.g.dim() != 4) throw dimension_error("pontryagin_full requires dim 4");
    const int dim = 4;
    const double inv_sqrt = b.det_sign / b.sqrt_abs_det.value();
    // R^{AB}_{MN} and R_{ABCD} values
    double r_uu_dd[4][4][4][4];
    double r_dddd[4][4][4][4];
    for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c)
            for (int m = 0; m < dim; ++m)
                for (int n = 0; n < dim; ++n) {
                    double s = 0.0;
                    for (int q = 0; q < dim; ++q)
                        s += b.ginv(c, q).value() * b.riemann_ud(a, q, m, n).value();
                    r_uu_dd[a][c][m][n] = s;  // R^{AC}_{MN}: first index born up
                    r_dddd[a][c][m][n] = b.riemann_dddd(a, c, m, n).value();
                }

    double p_riemann = 0.0;
    for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c)
            for (int m = 0; m < dim; ++m)
                for (int n = 0; n < dim; ++n) {
                    double star = 0.0;
                    for (int rr = 0; rr < dim; ++rr)
                        for (int ss = 0; ss < dim; ++ss) {
                            int sg = perm_sign4(m, n, rr, ss);
                            if (sg == 0) continue;
                            star += 0.5 * sg * inv_sqrt * r_uu_dd[a][c][rr][ss];
                        }
                    p_riemann += 0.5 * star * r_dddd[a][c][m][n];
                }

    double p_weyl = 0.0;
    for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c)
            for (int m = 0; m < dim; ++m)
                for (int n = 0; n < dim; ++n)
                    p_weyl += 0.5 * b.dual_weyl(a, c, m, n).value() *
                              b.weyl_down(a, c, m, n).value();
    return {p_riemann, p_weyl};
}

inline std::pair<double, double> pontryagin_full(const MetricField& metric,
                                                 const Point& p) {
    return pontryagin_full(curvature_bundle(metric, p));
}

// (C.C, *C.*C) full contractions.
inline std::pair<double, double> weyl_squared(const CurvatureBundle& b) {
    if (b.g.dim() != 4) throw dimension_error("weyl_squared requires dim 4");
    const int dim = 4;
    double c2 = 0.0, dc2 = 0.0;
    // lower *C's last two indices to contract with *C up
    double dual_dd[4][4][4][4];
    for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c)
            for (int m = 0; m < dim; ++m)
                for (int n = 0; n < dim; ++n) {
                    double s = 0.0;
                    for (int q = 0; q < dim; ++q)
                        for (int r = 0; r < dim; ++r)
                            s += b.g(m, q).value() * b.g(n, r).value() *
                                 b.dual_weyl(a, c, q, r).value();
                    dual_dd[a][c][m][n] = s;  // *C^{AB}_{MN}
                }
    for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c)
            for (int m = 0; m < dim; ++m)
                for (int n = 0; n < dim; ++n) {
                    c2 += b.weyl_up(a, c, m, n).value() * b.weyl_down(a, c, m, n).value();
                    double dual_down = 0.0;
                    for (int q = 0; q < dim; ++q)
                        for (int r = 0; r < dim; ++r)
                            dual_down += b.g(a, q).value() * b.g(c, r).value() *
                                         dual_dd[q][r][m][n];
                    dc2 += b.dual_weyl(a, c, m, n).value() * dual_down;
                }
    return {c2, dc2};
}

inline std::pair<double, double> weyl_squared(const MetricField& metric, const Point& p) {
    return weyl_squared(curvature_bundle(metric, p));
}

struct ChernSimonsResult {
    std::array<double, 4> current;  // J^A
    double divergence;              // (1/sqrt|g|) d_A (sqrt|g| J^A)
};

// J^A = eps^{ABCD} (G^E_{BF} d_C G^F_{DE} + 2/3 G^E_{BF} G^F_{CG} G^G_{DE})
inline ChernSimonsResult chern_simons_current(const CurvatureBundle& b) {
    if (b.g.dim() != 4) throw dimension_error("chern_simons_current requires dim 4");
    const int dim = 4;
    Jet inv_sqrt = b.det_sign / b.sqrt_abs_det;
    std::array<Jet, 4> J;
    for (auto& j : J) j = Jet::constant(0.0, dim, 3);
    for (int a = 0; a < dim; ++a)
        for (int bb = 0; bb < dim; ++bb)
            for (int c = 0; c < dim; ++c)
                for (int d = 0; d < dim; ++d) {
                    int sg = perm_sign4(a, bb, c, d);
                    if (sg == 0) continue;
                    Jet term = Jet::constant(0.0, dim, 3);
                    for (int e = 0; e < dim; ++e)
                        for (int f = 0; f < dim; ++f) {
                            term += b.gamma(e, bb, f) * b.gamma(f, d, e).partial(c);
                            for (int gg = 0; gg < dim; ++gg)
                                term += (2.0 / 3.0) * b.gamma(e, bb, f) *
                                        b.gamma(f, c, gg) * b.gamma(gg, d, e);
                        }
                    J[a] += static_cast<double>(sg) * term;
                }
    ChernSimonsResult res;
    double div = 0.0;
    for (int a = 0; a < dim; ++a) {
        J[a] = J[a] * inv_sqrt;
        res.current[a] = J[a].value();
        div += (b.sqrt_abs_det * J[a]).partial(a).value();
    }
    res.divergence = div / b.sqrt_abs_det.value();
    return res;
}

inline ChernSimonsResult chern_simons_current(const MetricField& metric, const Point& p) {
    return chern_simons_current(curvature_bundle(metric, p));
}

// d_m T^m for a contravariant vector of jets at the point.
inline Jet covariant_divergence(const CurvatureBundle& b, const Ten1& t) {
    const int dim = b.g.dim();
    Jet r = Jet::constant(0.0, dim, 3);
    for (int m = 0; m < dim; ++m) {
        r += t(m).partial(m);
        for (int l = 0; l < dim; ++l) r += b.gamma(m, m, l) * t(l);
    }
    return r;
}

// d_m T^{mn} for a rank-2 contravariant tensor of jets at the point.
inline Ten1 covariant_divergence(const CurvatureBundle& b, const Ten2& t) {
    const int dim = b.g.dim();
    Ten1 r = Ten1::zeros(dim, 3);
    for (int n = 0; n < dim; ++n) {
        Jet s = Jet::constant(0.0, dim, 3);
        for (int m = 0; m < dim; ++m) {
            s += t(m, n).partial(m);
            for (int l = 0; l < dim; ++l)
                s += b.gamma(m, m, l) * t(l, n) + b.gamma(n, m, l) * t(m, l);
        }
        r(n) = s;
    }
    return r;
}

inline Jet covariant_divergence(const MetricField& metric, const Point& p,
                                const std::function<Ten1(const Point&)>& field) {
    return covariant_divergence(curvature_bundle(metric, p), field(p));
}

inline Ten1 covariant_divergence(const MetricField& metric, const Point& p,
                                 const std::function<Ten2(const Point&)>& field) {
    return covariant_divergence(curvature_bundle(metric, p), field(p));
}

}  // namespace weylkk
