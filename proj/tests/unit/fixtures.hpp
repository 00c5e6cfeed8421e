#pragma once

#include "jdrisk/model/jump_law.hpp"
#include "jdrisk/model/params.hpp"

namespace fixture {

// Jump-free, undiscounted, perfectly correlated diffusions.
inline jdrisk::RiskParams diffusion(double rho) {
    jdrisk::RiskParams m;
    m.p = 1.0;
    m.r = 0.2;
    m.sigma_P = 1.0;
    m.sigma_R = 0.5;
    m.rho = rho;
    return m;
}

// Jump-free with delta = 0.1 > r = 0.05.
inline jdrisk::RiskParams discounted(double rho) {
    jdrisk::RiskParams m;
    m.p = 1.0;
    m.r = 0.05;
    m.sigma_P = 1.0;
    m.sigma_R = 0.5;
    m.rho = rho;
    m.delta = 0.1;
    return m;
}

// Exponential claims at rate 1, optional return jumps.
inline jdrisk::RiskParams jumps(double lambda_R = 0.0) {
    jdrisk::RiskParams m;
    m.p = 1.0;
    m.sigma_P = 0.5;
    m.lambda_P = 1.0;
    m.r = 0.2;
    m.sigma_R = 0.5;
    m.lambda_R = lambda_R;
    return m;
}

inline jdrisk::JumpLaw claims() { return jdrisk::JumpLaw::exponential(0.5, jdrisk::JumpRole::claim); }
inline jdrisk::JumpLaw returns() { return jdrisk::JumpLaw::shifted_lognormal(0.0, 0.1, jdrisk::JumpRole::ret); }

}  // namespace fixture
