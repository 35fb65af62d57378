#include "wdn/units.hpp"

#include <stdexcept>
#include <string>

namespace wdn {

std::string_view unit_name(Unit unit) {
    switch (unit) {
        case Unit::Gpm: return "gpm";
        case Unit::Cfs: return "cfs";
        case Unit::Inch: return "in";
        case Unit::Foot: return "ft";
    }
    return "?";
}

double convert_units(double value, Unit from, Unit to) {
    if (from == to) {
        return value;
    }
    if (from == Unit::Gpm && to == Unit::Cfs) return gpm_to_cfs(value);
    if (from == Unit::Cfs && to == Unit::Gpm) return cfs_to_gpm(value);
    if (from == Unit::Inch && to == Unit::Foot) return inches_to_feet(value);
    if (from == Unit::Foot && to == Unit::Inch) return feet_to_inches(value);
    throw std::invalid_argument("no conversion from " + std::string(unit_name(from)) + " to " +
                                std::string(unit_name(to)));
}

}  // namespace wdn
