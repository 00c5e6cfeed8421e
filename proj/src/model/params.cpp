#include "jdrisk/model/params.hpp"

#include "jdrisk/errors.hpp"

namespace jdrisk {

void RiskParams::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    JDRISK_REQUIRE(finite(p) && finite(r) && finite(rho), "RiskParams: non-finite parameter");
    JDRISK_REQUIRE(rho >= -1.0 && rho <= 1.0, "RiskParams: rho must lie in [-1, 1]");
    JDRISK_REQUIRE(sigma_P >= 0 && finite(sigma_P), "RiskParams: sigma_P must be nonnegative");
    JDRISK_REQUIRE(sigma_R >= 0 && finite(sigma_R), "RiskParams: sigma_R must be nonnegative");
    JDRISK_REQUIRE(lambda_P >= 0 && finite(lambda_P), "RiskParams: lambda_P must be nonnegative");
    JDRISK_REQUIRE(lambda_R >= 0 && finite(lambda_R), "RiskParams: lambda_R must be nonnegative");
    JDRISK_REQUIRE(delta >= 0 && finite(delta), "RiskParams: delta must be nonnegative");
}

}  // namespace jdrisk
