#pragma once

// Reference values from tests/oracles/compute_oracles.py (mpmath, 30 digits).

namespace oracle {

// p = 1, sigma_P = 1, sigma_R = 0.5, r = 0.2, rho = 1: ruin probability.
inline constexpr double psi_rho1_0_5 = 0.66196109761169910237;
inline constexpr double psi_rho1_1 = 0.4986720160146244943;
inline constexpr double psi_rho1_2 = 0.34235811911693043818;
inline constexpr double psi_rho1_5 = 0.19274265974568260101;

// delta = 0.1, r = 0.05, sigma_R = 0.5.
inline constexpr double alpha = 0.24339811320566038113;
inline constexpr double beta = 0.88679622641132076226;

// D and E at x = 0.5, lambda = alpha + 1, c = 1, sigma_P = 1, rho = 0.
inline constexpr double D_half = 0.098000007550352775422;
inline constexpr double E_half = 1470.7934192200406229;

// Discounted ruin probability without jumps, rho = 0.3, p = 1, sigma_P = 1.
inline constexpr double gerber_0_5 = 0.49569048545415021045;
inline constexpr double gerber_1 = 0.29570243356414857423;
inline constexpr double gerber_2 = 0.15218226740073213816;
inline constexpr double gerber_5 = 0.063696820531331998849;

// Threshold dividends, rho = 0, b = 2, mu = 0.5.
inline constexpr double C3 = -13.935603431637;
inline constexpr double C4 = 0.00234879203553934;
inline constexpr double C5 = -5.27194812712583;
inline constexpr double threshold_0_5 = 2.08889862746856;
inline constexpr double threshold_2 = 3.69850489896105;
inline constexpr double threshold_4 = 4.26418912304153;

// Barrier dividends, rho = 0, b = 1.
inline constexpr double C7 = -11.9551321031862;
inline constexpr double C8 = 0.00201499125642713;
inline constexpr double barrier_0_25 = 1.10781174530888;
inline constexpr double barrier_0_5 = 1.79203284336124;
inline constexpr double barrier_1 = 2.52925969054044;

}  // namespace oracle
