#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "golden_values.hpp"
#include "support/random_metric.hpp"
#include "weylkk/catalog.hpp"
#include "weylkk/kaluza_klein.hpp"

using namespace weylkk;

namespace {

MetricField flat3() {
    MetricField m;
    m.dim = 3;
    m.signature = Signature::euclidean;
    m.name = "flat3";
    m.components = [](const Point&) {
        Ten2 g = Ten2::zeros(3, 3);
        for (int i = 0; i < 3; ++i) g(i, i) = Jet::constant(1.0, 3, 3);
        return g;
    };
    return m;
}

KKTriple trivial_triple(Signature sig) {
    KKTriple kk;
    kk.reduction_signature = sig;
    kk.sigma = [](const Point&) { return Jet::constant(0.0, 3, 3); };
    kk.a = [](const Point&) { return Ten1::zeros(3, 3); };
    kk.g3 = flat3();
    return kk;
}

KKTriple random_triple(std::mt19937_64& rng, Signature sig) {
    KKTriple kk;
    kk.reduction_signature = sig;
    kk.g3 = testsupport::random_metric(rng, 3, Signature::euclidean);
    auto s = testsupport::random_scalar_field(rng, 3);
    auto a = testsupport::random_covector_field(rng, 3);
    kk.sigma = s;
    kk.a = a;
    return kk;
}

Point domain_point(std::mt19937_64& rng, const GeometryEntry& e, int ncoord = 3) {
    Point p;
    for (int i = 0; i < ncoord; ++i) {
        std::uniform_real_distribution<double> uni(e.domain[static_cast<std::size_t>(i)].lo,
                                                   e.domain[static_cast<std::size_t>(i)].hi);
        p.push_back(uni(rng));
    }
    return p;
}

}  // namespace

TEST_CASE("assemble_kk: trivial data gives the flat 4-metrics") {
    for (Signature sig : {Signature::euclidean, Signature::lorentzian}) {
        MetricField m4 = assemble_kk(trivial_triple(sig));
        Ten2 g = m4.eval({0.3, -0.8, 1.1, 0.4});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double want = i != j ? 0.0
                              : (i == 3 && sig == Signature::lorentzian) ? -1.0
                                                                         : 1.0;
                CHECK_THAT(g(i, j).value(), Catch::Matchers::WithinAbs(want, 1e-14));
            }
    }
}

TEST_CASE("assemble_kk: Gibbons-Hawking data reproduces the standard line element") {
    // ds^2 = V^{-1} (dtau + a)^2 + V dx.dx with V = 1 + m/r, a_phi = m(1 - cos th)
    const double mm = 1.0;
    auto e = builtin("taub_nut");
    MetricField m4 = assemble_kk(e.reduction());
    for (Point p : {Point{2.0, 1.0, 0.5, 0.0}, Point{3.7, 2.1, 4.0, 0.3}}) {
        Ten2 g = m4.eval(p);
        const double r = p[0], th = p[1];
        const double V = 1.0 + mm / r;
        const double aphi = mm * (1.0 - std::cos(th));
        CHECK_THAT(g(3, 3).value(), Catch::Matchers::WithinRel(1.0 / V, 1e-12));
        CHECK_THAT(g(2, 3).value(), Catch::Matchers::WithinRel(aphi / V, 1e-12));
        CHECK_THAT(g(0, 0).value(), Catch::Matchers::WithinRel(V, 1e-12));
        CHECK_THAT(g(1, 1).value(), Catch::Matchers::WithinRel(V * r * r, 1e-12));
        CHECK_THAT(g(2, 2).value(),
                   Catch::Matchers::WithinRel(
                       V * r * r * std::sin(th) * std::sin(th) + aphi * aphi / V, 1e-12));
        CHECK(std::abs(g(0, 3).value()) < 1e-14);
        CHECK(std::abs(g(1, 3).value()) < 1e-14);
    }
}

TEST_CASE("extract_kk round-trips") {
    SECTION("assemble(extract(m4)) on Kerr") {
        auto e = builtin("kerr");
        MetricField again = assemble_kk(extract_kk(*e.metric, Signature::lorentzian));
        std::mt19937_64 rng(3u);
        for (int t = 0; t < 5; ++t) {
            Point p = domain_point(rng, e, 4);
            Ten2 a = e.metric->eval(p);
            Ten2 b = again.eval(p);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    CHECK_THAT(b(i, j).value(),
                               Catch::Matchers::WithinAbs(
                                   a(i, j).value(), 1e-12 * std::abs(a(i, j).value()) + 1e-13));
        }
    }
    SECTION("extract(assemble(kk)) on random triples, both signatures") {
        std::mt19937_64 rng(4u);
        for (Signature sig : {Signature::euclidean, Signature::lorentzian}) {
            KKTriple kk = random_triple(rng, sig);
            KKTriple back = extract_kk(assemble_kk(kk), sig);
            for (int t = 0; t < 5; ++t) {
                Point p = testsupport::random_point(rng, 3);
                CHECK_THAT(back.sigma(p).value(),
                           Catch::Matchers::WithinAbs(kk.sigma(p).value(), 1e-12));
                Ten1 a0 = kk.a(p), a1 = back.a(p);
                Ten2 g0 = kk.g3.eval(p), g1 = back.g3.eval(p);
                for (int i = 0; i < 3; ++i) {
                    CHECK_THAT(a1(i).value(), Catch::Matchers::WithinAbs(a0(i).value(), 1e-12));
                    for (int j = 0; j < 3; ++j)
                        CHECK_THAT(g1(i, j).value(),
                                   Catch::Matchers::WithinAbs(g0(i, j).value(), 1e-12));
                }
                // first derivatives survive the round trip too
                for (int ax = 0; ax < 3; ++ax)
                    CHECK_THAT(back.sigma(p).d1(ax),
                               Catch::Matchers::WithinAbs(kk.sigma(p).d1(ax), 1e-10));
            }
        }
    }
}

TEST_CASE("extract_kk: closed-form Schwarzschild and Kerr data") {
    auto sch = builtin("schwarzschild");
    KKTriple kk = extract_kk(*sch.metric, Signature::lorentzian);
    Point p = {4.0, 1.1, 0.7};
    CHECK_THAT(kk.sigma(p).value(),
               Catch::Matchers::WithinRel(0.5 * std::log(1.0 - 2.0 / 4.0), 1e-12));
    Ten1 a = kk.a(p);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a(i).value()) < 1e-14);

    auto kerr = builtin("kerr");
    KKTriple kkk = extract_kk(*kerr.metric, Signature::lorentzian);
    Point q = {5.0, std::numbers::pi / 4, 0.3};
    Ten2 g4 = kerr.metric->eval({q[0], q[1], q[2], 0.0});
    CHECK_THAT(g4(3, 3).value(), Catch::Matchers::WithinRel(golden::kerr_g_tt, 1e-12));
    CHECK_THAT(g4(2, 3).value(), Catch::Matchers::WithinRel(golden::kerr_g_tphi, 1e-12));
    CHECK_THAT(kkk.a(q)(2).value(), Catch::Matchers::WithinRel(golden::kerr_a_phi, 1e-12));
    CHECK_THAT(kkk.sigma(q).value(),
               Catch::Matchers::WithinRel(0.5 * std::log(-golden::kerr_g_tt), 1e-12));
}

TEST_CASE("extract_kk error paths") {
    SECTION("x^4 dependence is not a Killing reduction") {
        MetricField m;
        m.dim = 4;
        m.signature = Signature::euclidean;
        m.components = [](const Point& p) {
            Jet x4 = Jet::variable(3, p[3], 4, 3);
            Ten2 g = Ten2::zeros(4, 3);
            for (int i = 0; i < 3; ++i) g(i, i) = Jet::constant(1.0, 4, 3);
            g(3, 3) = 1.0 + 0.1 * sin(x4);
            return g;
        };
        KKTriple kk = extract_kk(m, Signature::euclidean);
        CHECK_THROWS_AS(kk.sigma({0.1, 0.2, 0.3}), not_killing_error);
    }
    SECTION("wrong g_44 sign is a signature error") {
        auto sch = builtin("schwarzschild");
        KKTriple kk = extract_kk(*sch.metric, Signature::euclidean);
        CHECK_THROWS_AS(kk.sigma({4.0, 1.1, 0.7}), signature_error);
    }
    SECTION("dim 3 input") {
        CHECK_THROWS_AS(extract_kk(flat3(), Signature::euclidean), dimension_error);
    }
}

TEST_CASE("field_strength_f basics") {
    KKTriple kk = trivial_triple(Signature::euclidean);
    Ten1 f = field_strength_f(kk, {0.4, -0.2, 0.9});
    for (int i = 0; i < 3; ++i) CHECK(std::abs(f(i).value()) < 1e-14);

    // a = (-y/2, x/2, 0) on flat space: constant unit curl
    kk.a = [](const Point& p) {
        Jet x = Jet::variable(0, p[0], 3, 3);
        Jet y = Jet::variable(1, p[1], 3, 3);
        Ten1 a = Ten1::zeros(3, 3);
        a(0) = -0.5 * y;
        a(1) = 0.5 * x;
        return a;
    };
    f = field_strength_f(kk, {0.4, -0.2, 0.9});
    CHECK_THAT(f(2).value(), Catch::Matchers::WithinRel(1.0, 1e-13));
    CHECK(std::abs(f(0).value()) < 1e-14);
    CHECK(std::abs(f(1).value()) < 1e-14);
    // constant f: F = 0
    Ten1 F = F_vector(kk, {0.4, -0.2, 0.9});
    for (int i = 0; i < 3; ++i) CHECK(std::abs(F(i).value()) < 1e-13);

    // Gibbons-Hawking monopole: f^r = m / (V^3 r^2)
    auto tn = builtin("taub_nut").reduction();
    for (Point p : {Point{2.0, 1.0, 0.5}, Point{3.1, 2.0, 1.2}}) {
        Ten1 ftn = field_strength_f(tn, p);
        const double V = 1.0 + 1.0 / p[0];
        CHECK_THAT(ftn(0).value(),
                   Catch::Matchers::WithinRel(1.0 / (V * V * V * p[0] * p[0]), 1e-12));
        CHECK(std::abs(ftn(1).value()) < 1e-14);
        CHECK(std::abs(ftn(2).value()) < 1e-14);
    }
}

TEST_CASE("c and k tensors: flat, static, self-dual") {
    KKTriple kk = trivial_triple(Signature::euclidean);
    Point p0 = {0.1, 0.2, 0.3};
    CHECK(tensor_norm(curvature_bundle(kk.g3, p0), c_tensor(kk, p0)) < 1e-14);
    CHECK(tensor_norm(curvature_bundle(kk.g3, p0), k_tensor(kk, p0)) < 1e-14);

    // static reduction: f = 0 forces k = 0, spatial curvature keeps c nonzero
    auto sch = builtin("schwarzschild");
    KKTriple skk = extract_kk(*sch.metric, Signature::lorentzian);
    Point ps = {4.0, 1.1, 0.7};
    KKContext ctx = kk_context(skk, ps);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(ctx.f_up(i).value()) < 1e-13);
    CHECK(tensor_norm(ctx.b3, ctx.k) < 1e-12);
    CHECK(tensor_norm(ctx.b3, ctx.c) > 1e-4);

    // Taub-NUT: c = +k componentwise (self-dual branch of the main result)
    auto tn = builtin("taub_nut").reduction();
    std::mt19937_64 rng(8u);
    auto e = builtin("taub_nut");
    for (int t = 0; t < 20; ++t) {
        Point p = domain_point(rng, e);
        KKContext c3 = kk_context(tn, p);
        const double scale = std::max(tensor_norm(c3.b3, c3.c), 1e-30);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(c3.c(i, j).value() - c3.k(i, j).value()) < 1e-9 * scale);
    }
}

TEST_CASE("Taub-NUT 4-metric is self-dual: *C = +C") {
    auto kk = builtin("taub_nut").reduction().stripped();
    MetricField m4 = assemble_kk(kk);
    std::mt19937_64 rng(9u);
    auto e = builtin("taub_nut");
    for (int t = 0; t < 10; ++t) {
        Point p3 = domain_point(rng, e);
        CurvatureBundle b = curvature_bundle(m4, {p3[0], p3[1], p3[2], 0.0});
        const double scale = std::max(b.weyl_up.max_abs_value(), 1e-30);
        for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c)
                for (int m = 0; m < 4; ++m)
                    for (int n = 0; n < 4; ++n)
                        CHECK(std::abs(b.dual_weyl(a, c, m, n).value() -
                                       b.weyl_up(a, c, m, n).value()) < 1e-10 * scale);
    }
}

TEST_CASE("reduction equivalence on the catalog, 100 seeded points each") {
    std::mt19937_64 rng(10u);
    for (const char* name : {"taub_nut", "kerr", "schwarzschild", "flat_twisted4",
                             "conformally_flat_kk"}) {
        auto e = builtin(name);
        KKTriple kk = e.reduction();
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            Point p = domain_point(rng, e);
            worst = std::max(worst, reduced_weyl_check(kk, p).max_relative());
        }
        INFO(name);
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("reduction equivalence on random triples, both signatures") {
    std::mt19937_64 rng(11u);
    for (Signature sig : {Signature::euclidean, Signature::lorentzian}) {
        for (int trial = 0; trial < 4; ++trial) {
            KKTriple kk = random_triple(rng, sig);
            for (int t = 0; t < 5; ++t) {
                Point p = testsupport::random_point(rng, 3, 0.8);
                CHECK(reduced_weyl_check(kk, p).max_relative() < 1e-8);
            }
        }
    }
}

TEST_CASE("Pontryagin reduction: EW37, EW38, and 8 c.k agree") {
    SECTION("static data vanishes") {
        auto sch = builtin("schwarzschild");
        KKTriple kk = extract_kk(*sch.metric, Signature::lorentzian);
        CHECK(std::abs(pontryagin_reduced(kk, {4.0, 1.1, 0.7})) < 1e-13);
        CurvatureBundle b = curvature_bundle(*sch.metric, {4.0, 1.1, 0.7, 0.0});
        auto [pr, pw] = pontryagin_full(b);
        CHECK(std::abs(pr) < 1e-10 * b.max_curvature_scale());
        CHECK(std::abs(pw) < 1e-10 * b.max_curvature_scale());
    }
    SECTION("Kerr: full vs reduced with the conformal weight") {
        auto e = builtin("kerr");
        KKTriple kk = e.reduction();
        std::mt19937_64 rng(12u);
        for (int t = 0; t < 20; ++t) {
            Point p = domain_point(rng, e);
            CurvatureBundle b = curvature_bundle(*e.metric, {p[0], p[1], p[2], 0.0});
            auto [pr, pw] = pontryagin_full(b);
            const double sig = kk.sigma(p).value();
            const double red = std::exp(-4.0 * sig) * pontryagin_reduced(kk, p);
            // absolute floor at curvature scale: P passes through zero near
            // the equatorial plane
            const double tol = 1e-8 * std::max(std::abs(pr), b.max_curvature_scale());
            CHECK_THAT(pw, Catch::Matchers::WithinAbs(pr, tol));
            CHECK_THAT(red, Catch::Matchers::WithinAbs(pr, tol));
        }
    }
    SECTION("ratio P/(c.k) = 8 on sigma = 0 random data") {
        std::mt19937_64 rng(13u);
        for (Signature sig : {Signature::euclidean, Signature::lorentzian}) {
            KKTriple kk = random_triple(rng, sig).stripped();
            MetricField m4 = assemble_kk(kk);
            for (int t = 0; t < 5; ++t) {
                Point p3 = testsupport::random_point(rng, 3, 0.8);
                auto [pr, pw] = pontryagin_full(m4, {p3[0], p3[1], p3[2], 0.0});
                KKContext ctx = kk_context(kk, p3);
                const double ck = contract22_up(ctx.b3, ctx.c, ctx.k);
                if (std::abs(ck) < 1e-10) continue;
                CHECK_THAT(pr / ck, Catch::Matchers::WithinRel(8.0, 1e-7));
            }
        }
    }
}

TEST_CASE("footnote identity: C.C = 8 (c.c +- k.k) on sigma-stripped entries") {
    std::mt19937_64 rng(14u);
    for (const char* name : {"taub_nut", "kerr", "schwarzschild", "flat_twisted4",
                             "conformally_flat_kk"}) {
        auto e = builtin(name);
        KKTriple kk = e.reduction().stripped();
        MetricField m4 = assemble_kk(kk);
        const double s = kk.reduction_signature == Signature::lorentzian ? -1.0 : 1.0;
        for (int t = 0; t < 10; ++t) {
            Point p = domain_point(rng, e);
            auto [c2, dc2] = weyl_squared(m4, {p[0], p[1], p[2], 0.0});
            KKContext ctx = kk_context(kk, p);
            const double cc = contract22_up(ctx.b3, ctx.c, ctx.c);
            const double kkn = contract22_up(ctx.b3, ctx.k, ctx.k);
            const double want = 8.0 * (cc + s * kkn);
            INFO(name);
            CHECK_THAT(c2, Catch::Matchers::WithinAbs(
                               want, 1e-8 * std::max({std::abs(c2), std::abs(want), 1e-12})));
        }
    }
}

TEST_CASE("tracelessness and transversality at sample points") {
    std::mt19937_64 rng(15u);
    auto check_point = [](const KKTriple& kk, const Point& p) {
        KKContext ctx = kk_context(kk, p);
        double trc = 0.0, trk = 0.0;
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) {
                trc += ctx.b3.ginv(m, n).value() * ctx.c(m, n).value();
                trk += ctx.b3.ginv(m, n).value() * ctx.k(m, n).value();
            }
        const double sc = std::max({tensor_norm(ctx.b3, ctx.c), tensor_norm(ctx.b3, ctx.k),
                                    1e-3});
        CHECK(std::abs(trc) < 1e-10 * sc);
        CHECK(std::abs(trk) < 1e-10 * sc);
        const double divf = covariant_divergence(ctx.b3, ctx.f_up).value();
        const double sf = std::max(1.0, ctx.f2.value());
        CHECK(std::abs(divf) < 1e-10 * sf);
    };
    for (const char* name : {"taub_nut", "kerr", "conformally_flat_kk"}) {
        auto e = builtin(name);
        KKTriple kk = e.reduction();
        for (int t = 0; t < 20; ++t) check_point(kk, domain_point(rng, e));
    }
    for (Signature sig : {Signature::euclidean, Signature::lorentzian})
        for (int trial = 0; trial < 4; ++trial) {
            KKTriple kk = random_triple(rng, sig);
            for (int t = 0; t < 5; ++t) check_point(kk, testsupport::random_point(rng, 3, 0.8));
        }
}

TEST_CASE("classification of catalog geometries") {
    std::mt19937_64 rng(16u);
    SECTION("flat entries are trivial") {
        for (const char* name : {"flat_twisted4", "conformally_flat_kk"}) {
            auto e = builtin(name);
            KKTriple kk = e.reduction();
            for (int t = 0; t < 10; ++t) {
                ReducedBundle rb = reduced_bundle(kk, domain_point(rng, e), 1e-8);
                CHECK(rb.point_class == PointClass::trivial);
            }
        }
        KKTriple kk = trivial_triple(Signature::euclidean);
        CHECK(classify_point(kk, {0.2, 0.4, 0.1}, 1e-8) == PointClass::trivial);
    }
    SECTION("Schwarzschild is electric everywhere sampled") {
        auto e = builtin("schwarzschild");
        KKTriple kk = e.reduction();
        for (int t = 0; t < 25; ++t) {
            ReducedBundle rb = reduced_bundle(kk, domain_point(rng, e), 1e-8);
            CHECK(rb.point_class == PointClass::electric);
            CHECK(std::abs(rb.p_reduced) < 1e-12);
        }
    }
    SECTION("Kerr is nonzero_P at >= 95 of 100 generic points") {
        auto e = builtin("kerr");
        KKTriple kk = e.reduction();
        int hits = 0;
        for (int t = 0; t < 100; ++t) {
            ReducedBundle rb = reduced_bundle(kk, domain_point(rng, e), 1e-8);
            if (rb.point_class == PointClass::nonzero_P) ++hits;
        }
        CHECK(hits >= 95);
    }
    SECTION("Taub-NUT has nonzero P") {
        auto e = builtin("taub_nut");
        KKTriple kk = e.reduction();
        ReducedBundle rb = reduced_bundle(kk, {2.0, 1.0, 0.5}, 1e-8);
        CHECK(rb.point_class == PointClass::nonzero_P);
        CHECK(rb.p_reduced != 0.0);
    }
    SECTION("classification is monotone in the tolerance") {
        auto rank = [](PointClass c) {
            switch (c) {
                case PointClass::trivial: return 0;
                case PointClass::electric:
                case PointClass::magnetic: return 1;
                case PointClass::null_general: return 2;
                case PointClass::nonzero_P: return 3;
            }
            return -1;
        };
        auto e = builtin("kerr");
        KKTriple kk = e.reduction();
        for (int t = 0; t < 10; ++t) {
            Point p = domain_point(rng, e);
            int prev = 1000;
            for (double tol = 1e-12; tol < 1e3; tol *= 10.0) {
                int r = rank(classify_point(kk, p, tol));
                CHECK(r <= prev);
                prev = r;
            }
        }
    }
}

TEST_CASE("currents: static limit, conservation, and the EW29 cross-check") {
    SECTION("f = 0 collapses the currents") {
        auto e = builtin("schwarzschild");
        KKTriple kk = e.reduction();
        Point p = {4.5, 1.0, 0.3};
        CurrentsResult cr = currents(kk, p);
        CHECK(std::abs(cr.j_scalar.value()) < 1e-14);
        KKContext ctx = kk_context(kk, p);
        for (int m = 0; m < 3; ++m) {
            CHECK(std::abs(cr.j_vector(m).value()) < 1e-13);
            for (int n = 0; n < 3; ++n)
                CHECK_THAT(cr.j_tensor(m, n).value(),
                           Catch::Matchers::WithinAbs(
                               ctx.b3.ginv(m, n).value() * ctx.b3.ricci_scalar.value(),
                               1e-12));
        }
    }
    SECTION("tensor current: d j^{mn} = 12 d c^{mn} (Bianchi), conserved when c = 0") {
        // the conservation law holds on the branch where the Einstein-like
        // condition c = 0 is satisfied; in general the divergence collapses
        // to 12 d_m c^{mn} because the Einstein part is identically conserved
        std::mt19937_64 rng(17u);
        auto div_c = [](const KKContext& ctx) {
            Ten2 c_up = Ten2::zeros(3, 3);
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n) {
                    Jet s = Jet::constant(0.0, 3, 3);
                    for (int q = 0; q < 3; ++q)
                        for (int w = 0; w < 3; ++w)
                            s += ctx.b3.ginv(m, q) * ctx.b3.ginv(n, w) * ctx.c(q, w);
                    c_up(m, n) = s;
                }
            return covariant_divergence(ctx.b3, c_up);
        };
        auto etn = builtin("taub_nut");
        KKTriple tn = etn.reduction();
        for (int t = 0; t < 10; ++t) {
            Point p = domain_point(rng, etn);
            CurrentsResult cr = currents(tn, p);
            KKContext ctx = kk_context(tn, p);
            Ten1 dc = div_c(ctx);
            const double scale = std::max(1.0, ctx.b3.max_curvature_scale());
            for (int n = 0; n < 3; ++n)
                CHECK_THAT(cr.div_tensor(n).value(),
                           Catch::Matchers::WithinAbs(12.0 * dc(n).value(), 1e-9 * scale));
        }
        auto ecf = builtin("conformally_flat_kk");
        KKTriple cf = ecf.reduction();
        for (int t = 0; t < 10; ++t) {
            Point p = domain_point(rng, ecf);
            CurrentsResult cr = currents(cf, p);
            KKContext ctx = kk_context(cf, p);
            const double scale = std::max(1.0, ctx.b3.max_curvature_scale());
            for (int n = 0; n < 3; ++n)
                CHECK(std::abs(cr.div_tensor(n).value()) < 1e-7 * scale);
        }
    }
    SECTION("vector-current divergence equals the EW29 contraction and P/2") {
        std::mt19937_64 rng(18u);
        auto e = builtin("kerr");
        KKTriple kk = e.reduction();
        for (int t = 0; t < 10; ++t) {
            Point p = domain_point(rng, e);
            CurrentsResult cr = currents(kk, p);
            const double pred = pontryagin_reduced(kk, p);
            const double sc =
                std::max(std::abs(pred), classification_scale(kk_context(kk, p)));
            CHECK_THAT(cr.ew29_contraction, Catch::Matchers::WithinAbs(0.5 * pred, 1e-8 * sc));
            CHECK_THAT(cr.div_vector,
                       Catch::Matchers::WithinAbs(cr.ew29_contraction, 1e-7 * sc));
        }
        for (Signature sig : {Signature::euclidean, Signature::lorentzian}) {
            KKTriple rkk = random_triple(rng, sig);
            for (int t = 0; t < 5; ++t) {
                Point p = testsupport::random_point(rng, 3, 0.8);
                CurrentsResult cr = currents(rkk, p);
                const double pred = pontryagin_reduced(rkk, p);
                const double sc = std::max({std::abs(pred), std::abs(cr.div_vector), 1e-6});
                CHECK(std::abs(cr.ew29_contraction - 0.5 * pred) < 1e-9 * sc);
                CHECK(std::abs(cr.div_vector - cr.ew29_contraction) < 1e-7 * sc);
            }
        }
    }
}

TEST_CASE("F is a Killing vector on Einstein-Weyl reductions") {
    // c = k = 0 branch: EW22 promises d_(mu F_nu) = 0
    std::mt19937_64 rng(19u);
    for (const char* name : {"conformally_flat_kk", "taub_nut"}) {
        auto e = builtin(name);
        KKTriple kk = e.reduction();
        for (int t = 0; t < 10; ++t) {
            Point p = domain_point(rng, e);
            KKContext ctx = kk_context(kk, p);
            Ten1 F = F_vector_from(ctx);
            Ten1 F_dn = Ten1::zeros(3, 3);
            for (int m = 0; m < 3; ++m) {
                Jet s = Jet::constant(0.0, 3, 3);
                for (int n = 0; n < 3; ++n) s += ctx.b3.g(m, n) * F(n);
                F_dn(m) = s;
            }
            double fscale = 1e-6;
            for (int m = 0; m < 3; ++m)
                fscale = std::max({fscale, std::abs(F(m).value()),
                                   std::abs(F_dn(m).value())});
            for (int m = 0; m < 3; ++m)
                for (int n = 0; n < 3; ++n) {
                    Jet d = 0.5 * (F_dn(n).partial(m) + F_dn(m).partial(n));
                    for (int l = 0; l < 3; ++l) d -= ctx.b3.gamma(l, m, n) * F_dn(l);
                    CHECK(std::abs(d.value()) < 1e-8 * fscale);
                }
        }
    }
}

TEST_CASE("EW21: r = 5 f^2 + const on the Einstein-Weyl branch") {
    auto e = builtin("conformally_flat_kk");
    KKTriple kk = e.reduction();
    std::mt19937_64 rng(20u);
    double first = 0.0;
    for (int t = 0; t < 20; ++t) {
        Point p = domain_point(rng, e);
        KKContext ctx = kk_context(kk, p);
        const double v = ctx.b3.ricci_scalar.value() - 5.0 * ctx.f2.value();
        if (t == 0)
            first = v;
        else
            CHECK_THAT(v, Catch::Matchers::WithinAbs(first, 1e-7));
    }
}

TEST_CASE("reduced bundle invariants") {
    std::mt19937_64 rng(21u);
    auto e = builtin("kerr");
    KKTriple kk = e.reduction();
    for (int t = 0; t < 10; ++t) {
        Point p = domain_point(rng, e);
        ReducedBundle rb = reduced_bundle(kk, p, 1e-8);
        KKContext ctx = kk_context(kk, p);
        CHECK(rb.p_reduced == 8.0 * contract22_up(ctx.b3, ctx.c, ctx.k));
        CHECK(rb.c_norm == tensor_norm(ctx.b3, ctx.c));
        CHECK(rb.k_norm == tensor_norm(ctx.b3, ctx.k));
    }
}
