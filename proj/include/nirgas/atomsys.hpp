#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nirgas/constants.hpp"

// Physical description of the five-level gas and the nonlinear rotating-frame
// generator of its master equation.
//
// Level layout (0-based indices in code, 1-based in comments):
//   |1>--|2>  magnetic probe pair, |3>--|4> electric probe pair, offset by the
//   gap Delta; |4>--|5> carries the strong dressing drive. Coherent couplings:
//   Omega31 on (1,3) with the loop phase, Omega42 on (2,4), Omega54 on (4,5),
//   plus the two probe fields.
//
// All rates, Rabi frequencies and detunings are in units of gamma (the probe
// E1 decay rate); detunings are zero at resonance.
namespace nirgas {

using complexd = std::complex<double>;
using Mat5 = Eigen::Matrix<complexd, 5, 5>;
using Mat5r = Eigen::Matrix<double, 5, 5>;
using Mat25 = Eigen::Matrix<complexd, 25, 25>;
using Vec25 = Eigen::Matrix<complexd, 25, 1>;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedConfiguration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TransitionClass { E1, M1, E2, None };

struct Transition {
    int i = 0; // lower level, 1-based
    int j = 0; // upper level, 1-based
    TransitionClass cls = TransitionClass::None;
    double lambda_um = 0.0; // vacuum wavelength
};

struct LevelScheme {
    static constexpr int count = 5;
    // Per-level energies in units hbar*gamma. Informational: the dynamics is
    // driven entirely by the detunings, which already encode the energies.
    std::array<double, count> energies{};
    // Offset between the magnetic (1-2) and electric (3-4) probe transitions.
    double Delta = 2.0 * pi * 1e4;
    std::vector<Transition> transitions = default_transitions();

    static std::vector<Transition> default_transitions();
    void validate() const;
};

enum class Polarization { sigma_minus, sigma_plus };

// Sign s in the circular-polarization relation B_b = i*s*E_b.
inline double polarization_sign(Polarization p) {
    return p == Polarization::sigma_minus ? +1.0 : -1.0;
}

struct DriveConfig {
    complexd Omega31{6.3e-3, 0.0};
    complexd Omega42{5.6, 0.0};
    double DeltaPrime = 560.0; // effective gap; Omega54 = 2*(Delta + DeltaPrime)
    double delta31 = -1e-2;
    double delta54 = 0.0;
    double delta21 = 0.0;
    double phi = 0.0; // loop phase, carried by Omega31
    Polarization pol = Polarization::sigma_minus;
    // The rotating frame closes the drive loop only when the two loop lasers
    // share one frequency; anything else is rejected.
    double omega_a_minus_omega_c = 0.0;

    // Omega54 is tied to DeltaPrime and the gap rather than stored, so the
    // linkage Omega54 = 2*(Delta+DeltaPrime) cannot silently break.
    double Omega54(double Delta) const { return 2.0 * (Delta + DeltaPrime); }
    void validate() const;
};

struct DecayNetwork {
    // gamma(j,k): population decay rate j -> k (0-based), units gamma.
    Mat5r gamma = default_gamma();
    double gamma_C = 1.0; // collisional dephasing of every coherence
    double r = 0.0;       // incoherent pump, added to both 3->4 and 4->3

    static Mat5r default_gamma();
    Mat5r gamma_with_pump() const;
    // Total decay rate out of level x, pump included.
    double total_rate(int x) const;
    // Coherence decay rate for the (x,y) matrix element, pump included.
    double gamma_tilde(int x, int y) const;
    void validate() const;
};

struct MediumConfig {
    double N = 2.5e17;      // number density, cm^-3
    double lambda_um = 5.0; // probe vacuum wavelength
    double gamma_abs = 1e7; // absolute scale of gamma, rad/s

    double omega_b() const; // probe angular frequency, rad/s
    double d43() const;     // E1 probe dipole moment, esu cm
    double mu21() const;    // M1 probe moment, esu cm (alpha * d43)
    // Dimensionless field-feedback couplings: the local-field correction adds
    // g_E*rho43 (g_B*rho21) to the dimensionless probe amplitudes.
    double g_E() const;
    double g_B() const;
    void validate() const;
};

struct ProbeConfig {
    // Dimensionless electric probe amplitudes w_E = d43*E_b/(hbar*gamma)
    // swept for the linear-response regression, and the fixed magnetic
    // amplitude w_B = mu21*B_b/(hbar*gamma).
    std::vector<double> w_E_grid = default_w_E_grid();
    double w_B = 1e-4;
    double w_E = 0.0; // amplitude currently applied by the generator

    static std::vector<double> default_w_E_grid();
    void validate() const;
};

struct SystemConfig {
    LevelScheme levels;
    DriveConfig drive;
    DecayNetwork decay;
    MediumConfig medium;
    ProbeConfig probe;

    double Omega54() const { return drive.Omega54(levels.Delta); }
    void validate() const;
};

struct DensityMatrix {
    Mat5 m = Mat5::Zero();

    static DensityMatrix level(int j); // |j><j|, 0-based
    static DensityMatrix ground() { return level(0); }
    static DensityMatrix maximally_mixed();

    complexd rho21() const { return m(1, 0); }
    complexd rho43() const { return m(3, 2); }
    double population(int j) const { return m(j, j).real(); }

    double hermiticity_error() const;
    double trace_error() const;
    double min_eigenvalue() const;
    // Projects onto the Hermitian manifold (roundoff control during stepping).
    void hermitize();
};

// sqrt(3*gamma_ij*hbar*c^3 / (4*omega_ij^3)) in CGS-Gaussian units: the dipole
// moment of a transition with spontaneous rate gamma_ij at frequency omega_ij.
double dipole_from_decay(double gamma_ij, double omega_ij);

// Lorentz-Lorenz local fields: the external complex amplitudes plus (4pi/3)
// times the polarization 2*N*d34*rho43 (magnetization 2*N*mu12*rho21).
std::pair<complexd, complexd> local_fields(const DensityMatrix& rho,
                                           const MediumConfig& medium,
                                           complexd E_b, complexd B_b);

// Time-independent rotating-frame Hamiltonian in units hbar*gamma, evaluated
// with the local fields of the supplied state (the source of nonlinearity).
// Exactly Hermitian. Throws UnsupportedConfiguration if omega_a != omega_c.
Mat5 rotating_frame_generator(const DensityMatrix& rho, const SystemConfig& cfg);

// Full master-equation right-hand side in units gamma: -i[H(rho),rho] plus the
// decay/dephasing dissipator with the pump folded in. Traceless, Hermitian.
Mat5 liouvillian_rhs(const DensityMatrix& rho, const SystemConfig& cfg);

// Superoperator of the master equation linearized at frozen local couplings:
// u is the electric coupling w_E + g_E*rho43, v the magnetic one
// i*s*w_B + g_B*rho21. Acts on row-major vec(rho).
Mat25 frozen_field_superoperator(const SystemConfig& cfg, complexd u, complexd v);

} // namespace nirgas
