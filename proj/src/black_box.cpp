#include "osaas/black_box.hpp"

#include <stdexcept>

namespace osaas {

void MediaChannel::validate() const
{
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw std::domain_error("media channel width must be positive");
    }
    if (!std::isfinite(center)) {
        throw std::domain_error("media channel center must be finite");
    }
    if (guard_band_each_side < 0.0 || 2.0 * guard_band_each_side >= width) {
        throw std::domain_error("media channel guard bands must be >= 0 and sum below the width");
    }
}

void ProbeConfig::validate() const
{
    entry.validate();
    if (roll_off < 0.0 || roll_off > 1.0) {
        throw std::domain_error("probe " + entry.name + ": roll-off must lie in [0, 1]");
    }
    if (!(power_rule.sr_ref_gbd > 0.0)) {
        throw std::domain_error("probe " + entry.name + ": power rule reference rate must be positive");
    }
}

}  // namespace osaas
