#pragma once

#include <string_view>

namespace wdn {

// U.S. customary units used at the I/O boundary. Internally everything is
// cubic feet per second and feet.
enum class Unit { Gpm, Cfs, Inch, Foot };

inline constexpr double kGpmPerCfs = 448.8312;
inline constexpr double kInchesPerFoot = 12.0;

std::string_view unit_name(Unit unit);

// Converts between the supported pairs (GPM<->cfs, inches<->feet, and the
// identity). Throws std::invalid_argument for any other pair.
double convert_units(double value, Unit from, Unit to);

constexpr double gpm_to_cfs(double gpm) { return gpm / kGpmPerCfs; }
constexpr double cfs_to_gpm(double cfs) { return cfs * kGpmPerCfs; }
constexpr double inches_to_feet(double inches) { return inches / kInchesPerFoot; }
constexpr double feet_to_inches(double feet) { return feet * kInchesPerFoot; }

}  // namespace wdn
