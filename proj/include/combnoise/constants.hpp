#pragma once

namespace combnoise::constants {

// CODATA 2018 exact values (SI).
inline constexpr double planck_j_s = 6.62607015e-34;
inline constexpr double speed_of_light_m_s = 2.99792458e8;

} // namespace combnoise::constants
