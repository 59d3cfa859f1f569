#pragma once

/// Physical constants (SI, CODATA-2018 exact/recommended values).

namespace spol::constants {

inline constexpr double c0 = 2.99792458e8;          ///< speed of light, m/s (exact)
inline constexpr double hbar = 1.054571817e-34;     ///< reduced Planck constant, J*s
inline constexpr double eps0 = 8.8541878128e-12;    ///< vacuum permittivity, F/m
inline constexpr double e_charge = 1.602176634e-19; ///< elementary charge, C (exact)
inline constexpr double bohr_radius = 5.29177210903e-11;  ///< m

/// Atomic unit of electric dipole moment e*a0, C*m.
inline constexpr double ea0 = e_charge * bohr_radius;

inline constexpr double pi = 3.14159265358979323846;

}  // namespace spol::constants
