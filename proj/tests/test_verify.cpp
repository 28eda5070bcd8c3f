#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "weylkk/report.hpp"
#include "weylkk/rng.hpp"

using namespace weylkk;

namespace {

VerifyConfig small_config() {
    VerifyConfig cfg;
    cfg.points = 6;
    cfg.seed = 42;
    return cfg;
}

const CheckRecord& find_check(const VerifyReport& rep, const std::string& id) {
    for (const auto& c : rep.checks)
        if (c.id == id) return c;
    FAIL("missing check " + id);
    static CheckRecord dummy;
    return dummy;
}

}  // namespace

TEST_CASE("sampling is seed-determined and domain-bounded") {
    GeometryEntry e = builtin("taub_nut");
    auto a = sample_points(e, 50, 7);
    auto b = sample_points(e, 50, 7);
    auto c = sample_points(e, 50, 8);
    REQUIRE(a.size() == 50);
    CHECK(a == b);
    CHECK(a != c);
    for (const auto& p : a)
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i] >= e.domain[i].lo);
            CHECK(p[i] < e.domain[i].hi);
        }
}

TEST_CASE("grid points cover the box without duplicates") {
    GeometryEntry e = builtin("sphere3");
    auto pts = grid_points(e, {3, 2, 2});
    CHECK(pts.size() == 12);
    auto uniq = pts;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    CHECK(uniq.size() == pts.size());
}

TEST_CASE("every builtin passes its verify suite") {
    for (const auto& name : builtin_names()) {
        GeometryEntry e = builtin(name);
        VerifyReport rep = run_verify(e, small_config());
        INFO(name);
        for (const auto& c : rep.checks) {
            INFO(c.id << " residual " << c.max_residual << " scale " << c.scale
                      << " " << c.note);
            CHECK(c.passed);
        }
        CHECK(rep.ok());
        CHECK(std::is_sorted(rep.checks.begin(), rep.checks.end(),
                             [](const CheckRecord& a, const CheckRecord& b) {
                                 return a.id < b.id;
                             }));
    }
}

TEST_CASE("verify report content per geometry") {
    VerifyReport tn = run_verify(builtin("taub_nut"), small_config());
    CHECK(find_check(tn, "self_duality").note == "self-dual: c = +k");
    CHECK(find_check(tn, "ew21_constancy").note.find("c_estimate") !=
          std::string::npos);
    CHECK(find_check(tn, "einstein_weyl").passed);

    VerifyReport kr = run_verify(builtin("kerr"), small_config());
    CHECK(find_check(kr, "self_duality").note == "not applicable (lorentzian)");
    CHECK(find_check(kr, "classification").note == "nonzero_P: 6");
    // no Einstein-Weyl branch on a Lorentzian entry
    for (const auto& c : kr.checks) CHECK(c.id != "einstein_weyl");

    VerifyReport sw = run_verify(builtin("schwarzschild"), small_config());
    CHECK(find_check(sw, "classification").note == "electric: 6");

    VerifyReport s3 = run_verify(builtin("sphere3"), small_config());
    CHECK(s3.checks.size() == 4);  // bianchi + the three Weyl-structure identities
    CHECK(s3.ok());
}

TEST_CASE("verify flags broken geometries") {
    // a 4-metric that depends on the would-be Killing coordinate
    GeometryEntry e = builtin("flat_euclidean4");
    MetricField m = *e.metric;
    m.components = [](const Point& p) {
        Ten2 g = Ten2::zeros(4, 3);
        Jet x4 = Jet::variable(3, p[3], 4, 3);
        for (int i = 0; i < 4; ++i) g(i, i) = 1.0 + 0.1 * x4 * x4;
        return g;
    };
    e.metric = m;
    VerifyReport rep = run_verify(e, small_config());
    CHECK_FALSE(rep.ok());
    CHECK(find_check(rep, "evaluation").note.find("aborted") != std::string::npos);
}

TEST_CASE("json report shape and determinism") {
    GeometryEntry e = builtin("taub_nut");
    VerifyReport rep = run_verify(e, small_config());
    ordered_json j = report_json(rep, e.params, true);
    CHECK(j["tool"] == "weylkk");
    CHECK_FALSE(j.contains("generated_at"));
    CHECK(j["geometry"] == "taub_nut");
    CHECK(j["config"]["points"] == 6);
    CHECK(j["config"]["params"]["m"] == 1.0);
    REQUIRE(j["checks"].is_array());
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("id"));
        CHECK(c.contains("equation"));
        CHECK(c.contains("max_residual"));
        CHECK(c.contains("scale"));
        CHECK(c.contains("passed"));
        CHECK(c.contains("note"));
    }
    CHECK(j["summary"]["ok"] == true);

    // byte-identical across runs with the same config
    VerifyReport rep2 = run_verify(builtin("taub_nut"), small_config());
    CHECK(report_json(rep2, e.params, true).dump() == j.dump());

    ordered_json with_ts = report_json(rep, e.params, false);
    CHECK(with_ts.contains("generated_at"));
}

TEST_CASE("scan records and csv") {
    GeometryEntry e = builtin("schwarzschild");
    auto pts = sample_points(e, 10, 3);
    auto records = run_scan(e, pts, 1e-8);
    REQUIRE(records.size() == 10);
    for (const auto& r : records) {
        CHECK(r.point_class == PointClass::electric);
        CHECK(std::abs(r.p_full) < 1e-8);
        CHECK(r.p_reduced == 0.0);
        CHECK(r.c_norm > 0.0);
        CHECK(r.k_norm == 0.0);
    }
    std::string csv = scan_csv(e, records);
    CHECK(csv.substr(0, csv.find('\n')) ==
          "r,theta,phi,p_full,p_reduced,class,c_norm,k_norm");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);

    CHECK_THROWS_AS(run_scan(builtin("sphere3"), pts, 1e-8), catalog_error);

    auto kerr_records =
        run_scan(builtin("kerr"), sample_points(builtin("kerr"), 10, 3), 1e-8);
    int nonzero = 0;
    for (const auto& r : kerr_records) {
        CHECK_THAT(r.p_full,
                   Catch::Matchers::WithinAbs(r.p_reduced,
                                              1e-8 * std::max(1.0, std::abs(r.p_full))));
        if (r.point_class == PointClass::nonzero_P) ++nonzero;
    }
    CHECK(nonzero == 10);
}

TEST_CASE("list serialization") {
    ordered_json arr = list_json();
    REQUIRE(arr.is_array());
    CHECK(arr.size() == builtin_names().size());
    bool has_taub = false, has_kerr = false;
    for (const auto& j : arr) {
        if (j["name"] == "taub_nut") has_taub = true;
        if (j["name"] == "kerr") {
            has_kerr = true;
            CHECK(j["params"].contains("M"));
            CHECK(j["params"].contains("a"));
        }
    }
    CHECK(has_taub);
    CHECK(has_kerr);
    CHECK(list_text().find("taub_nut") != std::string::npos);
}
