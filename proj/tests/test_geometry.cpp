#include <doctest.h>

#include <cmath>
#include <numbers>

#include "uavsec/errors.hpp"
#include "uavsec/geometry.hpp"
#include "uavsec/quadrature.hpp"
#include "uavsec/rng.hpp"
#include "uavsec/units.hpp"

using namespace uavsec;
using geom::ProtectedZone;
using geom::RegionSpec;
using geom::ZoneKind;

namespace {

RegionSpec table_region(double kappa = 3.0) {
    return RegionSpec{5.0, 50.0, units::deg_to_rad(2.5), kappa};
}

// Draws a random feasible (kind, delta_p, q) triple.
ProtectedZone random_zone(const RegionSpec& reg, rng::Xoshiro256pp& rng, double& q_out) {
    for (;;) {
        const int pick = static_cast<int>(rng.next() % 3);
        const ZoneKind kind = pick == 0 ? ZoneKind::TypeI
                              : pick == 1 ? ZoneKind::TypeII
                                          : ZoneKind::TypeIII;
        const double q = 0.005 + 0.4 * rng.uniform01();
        const double lo = std::max(geom::min_angle(kind, q, reg),
                                   kind == ZoneKind::TypeI ? 0.0 : reg.delta_u);
        const double hi = geom::max_angle(kind, q, reg);
        if (!(lo < hi)) continue;
        const double delta_p = lo + (hi - lo) * rng.uniform01();
        try {
            q_out = q;
            return ProtectedZone{kind, delta_p, geom::radius_for_fraction(kind, delta_p, q, reg)};
        } catch (const InfeasibleZoneError&) {
        }
    }
}

} // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("region invariants and derived areas") {
    RegionSpec reg = table_region();
    reg.validate();
    CHECK(reg.l_e() == doctest::Approx(150.0));
    CHECK(reg.delta_e() == doctest::Approx(3.0 * units::deg_to_rad(2.5)));
    CHECK(reg.area_user() == doctest::Approx(107.99224746714916).epsilon(1e-12));
    CHECK(reg.area_eve() ==
          doctest::Approx((150.0 * 150.0 - 25.0) * reg.delta_e() - reg.area_user())
              .epsilon(1e-12));

    RegionSpec bad = reg;
    bad.kappa = 0.5;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("expansion ratio must exceed 1"),
                         ArgumentError);
    bad = reg;
    bad.l_u = 4.0;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("zone areas: degenerate and full-coverage cases") {
    const RegionSpec reg = table_region();
    CHECK(geom::zone_area({ZoneKind::TypeI, 0.5 * reg.delta_u, reg.l_u}, reg) == 0.0);
    CHECK(geom::zone_area({ZoneKind::TypeII, reg.delta_u, 30.0}, reg) == 0.0);

    const ProtectedZone full{ZoneKind::TypeIII, reg.delta_e(), reg.l_e()};
    CHECK(geom::zone_area(full, reg) == doctest::Approx(reg.area_eve()).epsilon(1e-12));
    CHECK(geom::zone_fraction(full, reg) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zone bound violations name the broken inequality") {
    const RegionSpec reg = table_region();
    CHECK_THROWS_WITH_AS(
        geom::zone_area({ZoneKind::TypeI, 2.0 * reg.delta_u, reg.l_u + 1.0}, reg),
        doctest::Contains("delta_p <= delta_u"), InfeasibleZoneError);
    CHECK_THROWS_WITH_AS(geom::zone_area({ZoneKind::TypeII, 2.0 * reg.delta_u, reg.l_u + 5.0}, reg),
                         doctest::Contains("l_p <= l_u"), InfeasibleZoneError);
    CHECK_THROWS_WITH_AS(geom::zone_area({ZoneKind::TypeIII, 2.0 * reg.delta_u, reg.l_i}, reg),
                         doctest::Contains("l_u <= l_p"), InfeasibleZoneError);
}

TEST_CASE("radius_for_fraction inverts zone_area") {
    const RegionSpec reg = table_region();
    SUBCASE("zero fraction lands on the inner radius") {
        CHECK(geom::radius_for_fraction(ZoneKind::TypeII, 2.0 * reg.delta_u, 0.0, reg) ==
              doctest::Approx(reg.l_i));
        CHECK(geom::radius_for_fraction(ZoneKind::TypeI, reg.delta_u, 0.0, reg) ==
              doctest::Approx(reg.l_u));
    }
    SUBCASE("closed form for Type-I at the user angle") {
        const double q = 0.05;
        const double expected = std::sqrt(reg.l_u * reg.l_u + q * reg.area_eve() / reg.delta_u);
        CHECK(geom::radius_for_fraction(ZoneKind::TypeI, reg.delta_u, q, reg) ==
              doctest::Approx(expected).epsilon(1e-13));
    }
    SUBCASE("round trip over random feasible inputs") {
        rng::Xoshiro256pp rng(41, 0);
        for (int it = 0; it < 100; ++it) {
            double q = 0.0;
            const ProtectedZone zone = random_zone(reg, rng, q);
            const double area = geom::zone_area(zone, reg);
            CHECK(area == doctest::Approx(q * reg.area_eve()).epsilon(1e-12));
        }
    }
    SUBCASE("unreachable fraction is rejected, not clamped") {
        // Type-I at a tiny angle cannot reach q = 0.5 within l_e.
        CHECK_THROWS_AS(geom::radius_for_fraction(ZoneKind::TypeI, 1e-4, 0.5, reg),
                        InfeasibleZoneError);
    }
}

TEST_CASE("min_radius matches the inverse formula at the widest angle") {
    const RegionSpec reg = table_region();
    CHECK(geom::min_radius(ZoneKind::TypeII, 0.0, reg) == doctest::Approx(reg.l_i));
    CHECK(geom::min_radius(ZoneKind::TypeI, 0.0, reg) == doctest::Approx(reg.l_u));
    for (double q = 0.01; q <= 0.2001; q += 0.01) {
        CHECK(geom::radius_for_fraction(ZoneKind::TypeI, reg.delta_u, q, reg) ==
              doctest::Approx(geom::min_radius(ZoneKind::TypeI, q, reg)).epsilon(1e-12));
        // Type-II can realize the fraction at its widest angle only while the
        // implied radius stays below the user radius.
        const double r2 = geom::min_radius(ZoneKind::TypeII, q, reg);
        if (r2 <= reg.l_u) {
            CHECK(geom::radius_for_fraction(ZoneKind::TypeII, reg.delta_e(), q, reg) ==
                  doctest::Approx(r2).epsilon(1e-12));
        } else {
            CHECK_THROWS_AS(geom::radius_for_fraction(ZoneKind::TypeII, reg.delta_e(), q, reg),
                            InfeasibleZoneError);
        }
        CHECK(geom::radius_for_fraction(ZoneKind::TypeIII, reg.delta_e(), q, reg) ==
              doctest::Approx(geom::min_radius(ZoneKind::TypeIII, q, reg)).epsilon(1e-12));
    }
}

TEST_CASE("min_angle closes the area at the kind's maximum radius") {
    const RegionSpec reg = table_region();
    CHECK(geom::min_angle(ZoneKind::TypeII, 0.0, reg) == doctest::Approx(reg.delta_u));
    CHECK(geom::min_angle(ZoneKind::TypeI, 0.0, reg) == doctest::Approx(0.0));
    for (double q = 0.01; q <= 0.2001; q += 0.01) {
        const double target = q * reg.area_eve();
        // Each kind's minimum angle closes the area at its maximum radius,
        // whenever that angle lies inside the kind's own angular box.
        const double m1 = geom::min_angle(ZoneKind::TypeI, q, reg);
        if (m1 <= reg.delta_u) {
            CHECK(geom::zone_area({ZoneKind::TypeI, m1, reg.l_e()}, reg) ==
                  doctest::Approx(target).epsilon(1e-10));
        }
        const double m2 = geom::min_angle(ZoneKind::TypeII, q, reg);
        if (m2 <= reg.delta_e()) {
            CHECK(geom::zone_area({ZoneKind::TypeII, m2, reg.l_u}, reg) ==
                  doctest::Approx(target).epsilon(1e-10));
        }
        const double m3 = geom::min_angle(ZoneKind::TypeIII, q, reg);
        if (m3 >= reg.delta_u) {
            CHECK(geom::zone_area({ZoneKind::TypeIII, m3, reg.l_e()}, reg) ==
                  doctest::Approx(target).epsilon(1e-10));
        }
    }
}

TEST_CASE("membership tests") {
    const RegionSpec reg = table_region();
    const ProtectedZone zone{ZoneKind::TypeI, 0.5 * reg.delta_u, 100.0};

    CHECK_FALSE(geom::in_unprotected_eve_region(0.0, 0.5 * (reg.l_i + reg.l_u), reg, zone));
    CHECK(geom::in_unprotected_eve_region(0.0, reg.l_e(), reg, zone));
    CHECK_FALSE(geom::in_unprotected_eve_region(0.0, 80.0, reg, zone));
    // Boundary points count as protected.
    CHECK(geom::in_protected_zone(zone.delta_p, zone.l_p, reg, zone));
    CHECK_FALSE(geom::in_unprotected_eve_region(zone.delta_p, zone.l_p, reg, zone));
    // Outside the Eve sector entirely.
    CHECK_FALSE(geom::in_unprotected_eve_region(reg.delta_e() + 0.01, 100.0, reg, zone));
}

TEST_CASE("monte carlo area consistency of the membership test") {
    const RegionSpec reg = table_region();
    double q = 0.0;
    rng::Xoshiro256pp rng(7, 1);
    const ProtectedZone zone = random_zone(reg, rng, q);

    const double bound_area = (reg.l_e() * reg.l_e() - reg.l_i * reg.l_i) * reg.delta_e();
    const std::size_t n = 1000000;
    std::size_t hits = 0;
    for (std::size_t it = 0; it < n; ++it) {
        const double theta = (2.0 * rng.uniform01() - 1.0) * reg.delta_e();
        const double r = std::sqrt(reg.l_i * reg.l_i +
                                   rng.uniform01() * (reg.l_e() * reg.l_e() - reg.l_i * reg.l_i));
        if (geom::in_unprotected_eve_region(theta, r, reg, zone)) ++hits;
    }
    const double p_hat = static_cast<double>(hits) / static_cast<double>(n);
    const double p_true = (reg.area_eve() - geom::zone_area(zone, reg)) / bound_area;
    const double sigma = std::sqrt(p_true * (1.0 - p_true) / static_cast<double>(n));
    CHECK(std::abs(p_hat - p_true) < 3.0 * sigma + 1e-12);
}

TEST_CASE("indicator integrates to the unprotected area for every kind") {
    const RegionSpec reg = table_region();
    // Radial boundaries located by bisecting the membership predicate, so the
    // area estimate is independent of the closed-form area expressions.
    auto area_by_membership = [&](const ProtectedZone& zone) {
        auto segment_mass = [&](double theta) {
            auto inside = [&](double r) {
                return geom::in_unprotected_eve_region(theta, r, reg, zone);
            };
            auto edge_between = [&](double lo, double hi) {
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (inside(mid) == inside(lo) ? lo : hi) = mid;
                }
                return 0.5 * (lo + hi);
            };
            // Candidate breakpoints: scan a coarse grid for state changes.
            double mass = 0.0;
            const int grid = 512;
            double prev_r = reg.l_i;
            bool prev_in = inside(prev_r + 1e-12);
            double seg_start = prev_in ? reg.l_i : -1.0;
            for (int g = 1; g <= grid; ++g) {
                const double r = reg.l_i + (reg.l_e() - reg.l_i) * g / grid;
                const bool in = inside(std::min(r, reg.l_e()) - 1e-12);
                if (in != prev_in) {
                    const double edge = edge_between(prev_r, r);
                    if (prev_in) {
                        mass += 0.5 * (edge * edge - seg_start * seg_start);
                    } else {
                        seg_start = edge;
                    }
                }
                prev_r = r;
                prev_in = in;
            }
            if (prev_in) mass += 0.5 * (reg.l_e() * reg.l_e() - seg_start * seg_start);
            return mass;
        };
        const double edges[5] = {-reg.delta_e(), -zone.delta_p, 0.0, zone.delta_p,
                                 reg.delta_e()};
        quad::Options opts{1e-10, 1e-9, 4000, true};
        auto batch = [&](const double* th, double* y, std::size_t n) {
            for (std::size_t i = 0; i < n; ++i) y[i] = segment_mass(th[i]);
        };
        return quad::integrate(batch, edges, opts).value;
    };

    for (double q : {0.05, 0.15}) {
        for (ZoneKind kind : {ZoneKind::TypeI, ZoneKind::TypeII, ZoneKind::TypeIII}) {
            const double lo = std::max(geom::min_angle(kind, q, reg),
                                       kind == ZoneKind::TypeI ? 0.0 : reg.delta_u);
            const double hi = geom::max_angle(kind, q, reg);
            if (!(lo < hi)) continue;
            const double delta_p = 0.5 * (lo + hi);
            const ProtectedZone zone{kind, delta_p,
                                     geom::radius_for_fraction(kind, delta_p, q, reg)};
            const double expect = reg.area_eve() - geom::zone_area(zone, reg);
            CHECK(area_by_membership(zone) == doctest::Approx(expect).epsilon(1e-6));
        }
    }
}

TEST_CASE("zone_area grows with angle and radius; fractions stay in [0,1]") {
    const RegionSpec reg = table_region();
    rng::Xoshiro256pp rng(13, 2);
    for (int it = 0; it < 200; ++it) {
        double q = 0.0;
        const ProtectedZone zone = random_zone(reg, rng, q);
        const double base = geom::zone_area(zone, reg);
        const double frac = geom::zone_fraction(zone, reg);
        CHECK(frac >= 0.0);
        CHECK(frac <= 1.0);

        ProtectedZone wider = zone;
        wider.delta_p = std::min(wider.delta_p * 1.05,
                                 zone.kind == ZoneKind::TypeI ? reg.delta_u : reg.delta_e());
        CHECK(geom::zone_area(wider, reg) >= base - 1e-12);

        ProtectedZone longer = zone;
        longer.l_p = std::min(longer.l_p * 1.02,
                              zone.kind == ZoneKind::TypeII ? reg.l_u : reg.l_e());
        CHECK(geom::zone_area(longer, reg) >= base - 1e-12);
    }
}

TEST_CASE("Type-II and Type-III agree at l_p = l_u") {
    const RegionSpec reg = table_region();
    for (double delta_p = reg.delta_u * 1.1; delta_p < reg.delta_e(); delta_p += 0.01) {
        const double a2 = geom::zone_area({ZoneKind::TypeII, delta_p, reg.l_u}, reg);
        const double a3 = geom::zone_area({ZoneKind::TypeIII, delta_p, reg.l_u}, reg);
        CHECK(a2 == doctest::Approx(a3).epsilon(1e-12));
        CHECK(a2 == doctest::Approx((reg.l_u * reg.l_u - reg.l_i * reg.l_i) *
                                    (delta_p - reg.delta_u))
                        .epsilon(1e-12));
    }
}

TEST_CASE("min-angle zone spans kinds consistently") {
    const RegionSpec reg = table_region();
    for (double q : {0.01, 0.05, 0.2, 0.6, 0.9}) {
        const auto zone = geom::min_angle_zone(q, reg);
        CHECK(geom::zone_fraction(zone, reg) == doctest::Approx(q).epsilon(1e-9));
        CHECK(zone.delta_p == doctest::Approx(geom::global_min_angle(q, reg)).epsilon(1e-12));
    }
}

TEST_SUITE_END();
