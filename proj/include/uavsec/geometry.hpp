#pragma once

#include <array>
#include <string>

// Annular-sector geometry of the user region, the surrounding Eve region,
// and the protected zone carved out of the Eve region. All angles are
// radians; the boresight azimuth is fixed to 0 (every quantity of interest
// depends only on angular offsets).

namespace uavsec::geom {

enum class ZoneKind { TypeI, TypeII, TypeIII };

const char* zone_kind_name(ZoneKind kind);

/// User/Eve region layout. The user region is the annular sector with
/// radii [l_i, l_u] and half-angle delta_u; the Eve region is the larger
/// sector with radii [l_i, kappa*l_u] and half-angle kappa*delta_u, minus
/// the user region.
struct RegionSpec {
    double l_i = 5.0;      ///< inner radius [m]
    double l_u = 50.0;     ///< user outer radius [m]
    double delta_u = 0.0;  ///< user half-angle [rad]
    double kappa = 3.0;    ///< expansion ratio (> 1)

    double l_e() const { return kappa * l_u; }
    double delta_e() const { return kappa * delta_u; }
    double area_user() const { return (l_u * l_u - l_i * l_i) * delta_u; }
    double area_eve() const {
        return (l_e() * l_e() - l_i * l_i) * delta_e() - area_user();
    }

    /// Throws ArgumentError unless 0 < l_i < l_u, delta_u > 0, kappa > 1.
    void validate() const;
};

/// A protected zone: the closed sector {|theta| <= delta_p, lo(kind) <= r <= l_p}
/// where lo = l_u for Type-I and l_i for Type-II/III. Its intersection with
/// the Eve region is what gets cleared of eavesdroppers.
struct ProtectedZone {
    ZoneKind kind = ZoneKind::TypeI;
    double delta_p = 0.0;  ///< half-angle [rad]
    double l_p = 0.0;      ///< outer radius [m]
};

/// Area of zone ∩ Eve region. Throws InfeasibleZoneError (naming the violated
/// inequality) when (delta_p, l_p) falls outside the kind's box.
double zone_area(const ProtectedZone& zone, const RegionSpec& reg);

/// Area fraction q = zone_area / area_eve, in [0, 1].
double zone_fraction(const ProtectedZone& zone, const RegionSpec& reg);

/// Radius l_p realizing area fraction q at half-angle delta_p for the given
/// kind. Throws InfeasibleZoneError if no radius within the kind's radial
/// bounds can realize the fraction.
double radius_for_fraction(ZoneKind kind, double delta_p, double q, const RegionSpec& reg);

/// Smallest radius that can realize fraction q (attained at the kind's
/// maximum half-angle: delta_u for Type-I, kappa*delta_u for Type-II/III).
double min_radius(ZoneKind kind, double q, const RegionSpec& reg);

/// Smallest half-angle that can realize fraction q (attained at the kind's
/// maximum radius: l_e for Type-I/III, l_u for Type-II).
double min_angle(ZoneKind kind, double q, const RegionSpec& reg);

/// Largest half-angle that can realize fraction q for the kind, or a value
/// below min_angle when the kind cannot realize q at all.
double max_angle(ZoneKind kind, double q, const RegionSpec& reg);

/// Smallest feasible half-angle over all three kinds (Type-I when it fits
/// within delta_u, otherwise Type-III).
double global_min_angle(double q, const RegionSpec& reg);

/// The zone at the globally minimal half-angle (outer radius pinned to l_e).
ProtectedZone min_angle_zone(double q, const RegionSpec& reg);

/// Zone with the given half-angle and fraction; picks the unique kind whose
/// box admits (delta_p, q).
ProtectedZone zone_for_angle(double delta_p, double q, const RegionSpec& reg);

bool in_user_region(double theta, double r, const RegionSpec& reg);
bool in_eve_region(double theta, double r, const RegionSpec& reg);

/// Closed-set membership: points exactly on a zone edge count as protected.
bool in_protected_zone(double theta, double r, const RegionSpec& reg, const ProtectedZone& zone);

/// True iff (theta, r) lies in the Eve region and outside the protected zone.
bool in_unprotected_eve_region(double theta, double r, const RegionSpec& reg,
                               const ProtectedZone& zone);

struct RadialInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Radial cross-section of the unprotected Eve region at azimuth theta:
/// zero, one or two disjoint intervals.
int unprotected_radial_intervals(double theta, const RegionSpec& reg, const ProtectedZone& zone,
                                 std::array<RadialInterval, 2>& out);

} // namespace uavsec::geom
