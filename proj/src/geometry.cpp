#include "uavsec/geometry.hpp"

#include <cmath>
#include <sstream>

#include "uavsec/errors.hpp"

namespace uavsec::geom {

namespace {

// Slack used when checking box bounds computed by inverse formulas, so that
// values landing on a boundary up to rounding are accepted.
constexpr double kBoundSlack = 1e-9;

[[noreturn]] void throw_bound(ZoneKind kind, const std::string& inequality) {
    std::ostringstream msg;
    msg << "infeasible " << zone_kind_name(kind) << " zone: violates " << inequality;
    throw InfeasibleZoneError(msg.str());
}

void check_zone_bounds(const ProtectedZone& z, const RegionSpec& reg) {
    const double slack_r = kBoundSlack * reg.l_e();
    const double slack_a = kBoundSlack * reg.delta_e();
    switch (z.kind) {
    case ZoneKind::TypeI:
        if (z.l_p < reg.l_u - slack_r) throw_bound(z.kind, "l_u <= l_p");
        if (z.l_p > reg.l_e() + slack_r) throw_bound(z.kind, "l_p <= l_e");
        if (z.delta_p > reg.delta_u + slack_a) throw_bound(z.kind, "delta_p <= delta_u");
        if (z.delta_p < 0.0) throw_bound(z.kind, "delta_p >= 0");
        break;
    case ZoneKind::TypeII:
        if (z.l_p < reg.l_i - slack_r) throw_bound(z.kind, "l_i <= l_p");
        if (z.l_p > reg.l_u + slack_r) throw_bound(z.kind, "l_p <= l_u");
        if (z.delta_p < reg.delta_u - slack_a) throw_bound(z.kind, "delta_u <= delta_p");
        if (z.delta_p > reg.delta_e() + slack_a) throw_bound(z.kind, "delta_p <= delta_e");
        break;
    case ZoneKind::TypeIII:
        if (z.l_p < reg.l_u - slack_r) throw_bound(z.kind, "l_u <= l_p");
        if (z.l_p > reg.l_e() + slack_r) throw_bound(z.kind, "l_p <= l_e");
        if (z.delta_p < reg.delta_u - slack_a) throw_bound(z.kind, "delta_u <= delta_p");
        if (z.delta_p > reg.delta_e() + slack_a) throw_bound(z.kind, "delta_p <= delta_e");
        break;
    }
}

double zone_inner_radius(ZoneKind kind, const RegionSpec& reg) {
    return kind == ZoneKind::TypeI ? reg.l_u : reg.l_i;
}

} // namespace

const char* zone_kind_name(ZoneKind kind) {
    switch (kind) {
    case ZoneKind::TypeI: return "Type-I";
    case ZoneKind::TypeII: return "Type-II";
    case ZoneKind::TypeIII: return "Type-III";
    }
    return "?";
}

void RegionSpec::validate() const {
    if (!(l_i > 0.0)) throw ArgumentError("region: inner radius must be positive");
    if (!(l_u > l_i)) throw ArgumentError("region: outer radius must exceed inner radius");
    if (!(delta_u > 0.0)) throw ArgumentError("region: user half-angle must be positive");
    if (!(kappa > 1.0)) throw ArgumentError("region: expansion ratio must exceed 1");
}

double zone_area(const ProtectedZone& zone, const RegionSpec& reg) {
    check_zone_bounds(zone, reg);
    double area = 0.0;
    switch (zone.kind) {
    case ZoneKind::TypeI:
        area = (zone.l_p * zone.l_p - reg.l_u * reg.l_u) * zone.delta_p;
        break;
    case ZoneKind::TypeII:
        area = (zone.l_p * zone.l_p - reg.l_i * reg.l_i) * (zone.delta_p - reg.delta_u);
        break;
    case ZoneKind::TypeIII:
        area = (zone.l_p * zone.l_p - reg.l_i * reg.l_i) * zone.delta_p - reg.area_user();
        break;
    }
    return std::max(area, 0.0);
}

double zone_fraction(const ProtectedZone& zone, const RegionSpec& reg) {
    return zone_area(zone, reg) / reg.area_eve();
}

double radius_for_fraction(ZoneKind kind, double delta_p, double q, const RegionSpec& reg) {
    if (q < 0.0 || q > 1.0) throw ArgumentError("area fraction must lie in [0, 1]");
    const double target = q * reg.area_eve();
    double lp2 = 0.0;
    switch (kind) {
    case ZoneKind::TypeI:
        if (delta_p > reg.delta_u + kBoundSlack * reg.delta_e())
            throw_bound(kind, "delta_p <= delta_u");
        if (q == 0.0) return reg.l_u;
        if (!(delta_p > 0.0)) throw_bound(kind, "delta_p > 0 for nonzero area");
        lp2 = reg.l_u * reg.l_u + target / delta_p;
        break;
    case ZoneKind::TypeII:
        if (delta_p < reg.delta_u - kBoundSlack * reg.delta_e())
            throw_bound(kind, "delta_u <= delta_p");
        if (delta_p > reg.delta_e() + kBoundSlack * reg.delta_e())
            throw_bound(kind, "delta_p <= delta_e");
        if (q == 0.0) return reg.l_i;
        if (!(delta_p > reg.delta_u)) throw_bound(kind, "delta_p > delta_u for nonzero area");
        lp2 = reg.l_i * reg.l_i + target / (delta_p - reg.delta_u);
        break;
    case ZoneKind::TypeIII:
        if (delta_p < reg.delta_u - kBoundSlack * reg.delta_e())
            throw_bound(kind, "delta_u <= delta_p");
        if (delta_p > reg.delta_e() + kBoundSlack * reg.delta_e())
            throw_bound(kind, "delta_p <= delta_e");
        lp2 = reg.l_i * reg.l_i + (target + reg.area_user()) / delta_p;
        break;
    }
    double l_p = std::sqrt(lp2);
    const double slack = kBoundSlack * reg.l_e();
    const double lo = zone_inner_radius(kind, reg);
    const double hi = kind == ZoneKind::TypeII ? reg.l_u : reg.l_e();
    if (l_p < lo - slack) throw_bound(kind, "l_p >= its lower radial bound");
    if (l_p > hi + slack)
        throw_bound(kind, "l_p <= its upper radial bound (fraction too large for this angle)");
    return std::clamp(l_p, lo, hi);
}

double min_radius(ZoneKind kind, double q, const RegionSpec& reg) {
    if (q < 0.0 || q > 1.0) throw ArgumentError("area fraction must lie in [0, 1]");
    const double lu2 = reg.l_u * reg.l_u;
    const double li2 = reg.l_i * reg.l_i;
    const double k = reg.kappa;
    switch (kind) {
    case ZoneKind::TypeI:
        return std::sqrt((1.0 + q * (k * k * k - 1.0)) * lu2 - q * (k - 1.0) * li2);
    case ZoneKind::TypeII:
        return std::sqrt(q * (1.0 + k + k * k) * lu2 + (1.0 - q) * li2);
    case ZoneKind::TypeIII:
        return std::sqrt(((1.0 + q * (k * k * k - 1.0)) * lu2 + (1.0 - q) * (k - 1.0) * li2) / k);
    }
    return 0.0;
}

double min_angle(ZoneKind kind, double q, const RegionSpec& reg) {
    if (q < 0.0 || q > 1.0) throw ArgumentError("area fraction must lie in [0, 1]");
    const double target = q * reg.area_eve();
    const double le2 = reg.l_e() * reg.l_e();
    const double lu2 = reg.l_u * reg.l_u;
    const double li2 = reg.l_i * reg.l_i;
    switch (kind) {
    case ZoneKind::TypeI:
        return target / (le2 - lu2);
    case ZoneKind::TypeII:
        return reg.delta_u + target / (lu2 - li2);
    case ZoneKind::TypeIII:
        return (target + reg.area_user()) / (le2 - li2);
    }
    return 0.0;
}

double max_angle(ZoneKind kind, double q, const RegionSpec& reg) {
    switch (kind) {
    case ZoneKind::TypeI:
        return reg.delta_u;
    case ZoneKind::TypeII:
        return reg.delta_e();
    case ZoneKind::TypeIII:
        // Above this angle the required radius drops below l_u (Type-II land).
        return std::min(reg.delta_e(),
                        (q * reg.area_eve() + reg.area_user()) / (reg.l_u * reg.l_u - reg.l_i * reg.l_i));
    }
    return 0.0;
}

double global_min_angle(double q, const RegionSpec& reg) {
    const double a1 = min_angle(ZoneKind::TypeI, q, reg);
    if (a1 <= reg.delta_u) return a1;
    return min_angle(ZoneKind::TypeIII, q, reg);
}

ProtectedZone min_angle_zone(double q, const RegionSpec& reg) {
    const double a1 = min_angle(ZoneKind::TypeI, q, reg);
    ZoneKind kind = a1 <= reg.delta_u ? ZoneKind::TypeI : ZoneKind::TypeIII;
    const double delta_p = kind == ZoneKind::TypeI ? a1 : min_angle(ZoneKind::TypeIII, q, reg);
    return ProtectedZone{kind, delta_p, radius_for_fraction(kind, delta_p, q, reg)};
}

ProtectedZone zone_for_angle(double delta_p, double q, const RegionSpec& reg) {
    ZoneKind kind;
    if (delta_p <= reg.delta_u) {
        kind = ZoneKind::TypeI;
    } else if (delta_p <= max_angle(ZoneKind::TypeIII, q, reg)) {
        kind = ZoneKind::TypeIII;
    } else {
        kind = ZoneKind::TypeII;
    }
    return ProtectedZone{kind, delta_p, radius_for_fraction(kind, delta_p, q, reg)};
}

bool in_user_region(double theta, double r, const RegionSpec& reg) {
    return std::abs(theta) <= reg.delta_u && r >= reg.l_i && r <= reg.l_u;
}

bool in_eve_region(double theta, double r, const RegionSpec& reg) {
    if (std::abs(theta) > reg.delta_e() || r < reg.l_i || r > reg.l_e()) return false;
    return !in_user_region(theta, r, reg);
}

bool in_protected_zone(double theta, double r, const RegionSpec& reg, const ProtectedZone& zone) {
    return std::abs(theta) <= zone.delta_p && r >= zone_inner_radius(zone.kind, reg) &&
           r <= zone.l_p;
}

bool in_unprotected_eve_region(double theta, double r, const RegionSpec& reg,
                               const ProtectedZone& zone) {
    return in_eve_region(theta, r, reg) && !in_protected_zone(theta, r, reg, zone);
}

int unprotected_radial_intervals(double theta, const RegionSpec& reg, const ProtectedZone& zone,
                                 std::array<RadialInterval, 2>& out) {
    const double a = std::abs(theta);
    if (a > reg.delta_e()) return 0;

    // Eve-region cross-section, minus the user region where it applies.
    double lo = reg.l_i;
    const double hi = reg.l_e();
    if (a <= reg.delta_u) lo = reg.l_u;

    // The zone cross-section [z_lo, z_hi] removes a further band.
    double z_lo = 0.0, z_hi = -1.0;
    if (a <= zone.delta_p) {
        z_lo = zone_inner_radius(zone.kind, reg);
        z_hi = zone.l_p;
    }

    int n = 0;
    if (z_hi < z_lo || z_hi <= lo || z_lo >= hi) {
        if (hi > lo) out[n++] = {lo, hi};
        return n;
    }
    if (z_lo > lo) out[n++] = {lo, z_lo};
    if (z_hi < hi) out[n++] = {z_hi, hi};
    return n;
}

} // namespace uavsec::geom
