#ifndef AB_CONSTANTS_HPP
#define AB_CONSTANTS_HPP

#include <numbers>

namespace ab::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double mu0 = 4.0 * pi * 1e-7;            // T m / A
inline constexpr double c_light = 299792458.0;            // m / s
inline constexpr double eps0 = 1.0 / (mu0 * c_light * c_light);
inline constexpr double planck_h = 6.62607015e-34;        // J s (exact)
inline constexpr double hbar = planck_h / (2.0 * pi);     // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double electron_mass = 9.1093837015e-31; // kg

} // namespace ab::constants

#endif
