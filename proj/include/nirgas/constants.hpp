#pragma once

// Absolute (CGS-Gaussian) constants. They enter only through dipole moments
// and the dimensionless field-feedback couplings; the rest of the code works
// in units of the probe-transition decay rate gamma.
namespace nirgas {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double hbar_cgs = 1.054571817e-27; // erg s
inline constexpr double c_cgs = 2.99792458e10;      // cm / s

// Fine-structure constant; magnetic-dipole and quadrupole-class decay rates
// scale as alpha^2 relative to an electric-dipole rate at the same frequency.
inline constexpr double fine_structure = 1.0 / 137.0;

} // namespace nirgas
