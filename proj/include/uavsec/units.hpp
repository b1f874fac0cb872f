#pragma once

#include <cmath>
#include <numbers>

// dB / dBm / degree conversions, kept in one place so every module agrees.

namespace uavsec::units {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

} // namespace uavsec::units
