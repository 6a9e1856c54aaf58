#include "nirgas/atomsys.hpp"

#include <cmath>

namespace nirgas {

using namespace std::complex_literals;

std::vector<Transition> LevelScheme::default_transitions() {
    // The magnetic pair shares the probe wavelength with the electric pair to
    // within Delta/omega_b ~ 1e-9; both are listed at the probe wavelength.
    return {
        {1, 2, TransitionClass::M1, 5.0},
        {3, 4, TransitionClass::E1, 5.0},
        {1, 3, TransitionClass::E1, 5.0},
        {2, 4, TransitionClass::E1, 5.0},
        {4, 5, TransitionClass::E1, 5.0},
    };
}

void LevelScheme::validate() const {
    if (!(Delta > 0.0))
        throw ConfigError("LevelScheme: Delta must be positive");
    // The transition graph is fixed: exactly these five links, in any order.
    const std::array<std::pair<int, int>, 5> required{
        {{1, 2}, {3, 4}, {1, 3}, {2, 4}, {4, 5}}};
    if (transitions.size() != required.size())
        throw ConfigError("LevelScheme: expected exactly 5 transitions");
    for (auto [i, j] : required) {
        bool found = false;
        for (const auto& t : transitions) {
            if (t.i == i && t.j == j) {
                if (t.cls == TransitionClass::None)
                    throw ConfigError("LevelScheme: transition (" +
                                      std::to_string(i) + "," + std::to_string(j) +
                                      ") must have a multipole class");
                found = true;
                break;
            }
        }
        if (!found)
            throw ConfigError("LevelScheme: missing transition (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

void DriveConfig::validate() const {
    if (omega_a_minus_omega_c != 0.0)
        throw UnsupportedConfiguration(
            "only omega_a == omega_c is supported: the drive loop has no "
            "stationary rotating frame otherwise");
}

Mat5r DecayNetwork::default_gamma() {
    // Decay channels permitted by the alternating parity of the level ladder:
    // E1 rates gamma on 4->1, 4->2, 4->3 and 5->4; alpha^2-suppressed rates on
    // the same-parity pairs 2->1 (the magnetic probe transition) and 3->1.
    // The slow 3->1 channel is what lets the weak Omega31 drive saturate the
    // 1-3 pair and build the large upper-probe population the electric
    // response needs; the 4->1 channel returns pumped population to the
    // ground level instead of letting it pile up in |2>.
    const double a2 = fine_structure * fine_structure;
    Mat5r g = Mat5r::Zero();
    g(1, 0) = a2;  // 2 -> 1
    g(2, 0) = a2;  // 3 -> 1
    g(3, 0) = 1.0; // 4 -> 1
    g(3, 1) = 1.0; // 4 -> 2
    g(3, 2) = 1.0; // 4 -> 3
    g(4, 3) = 1.0; // 5 -> 4
    return g;
}

Mat5r DecayNetwork::gamma_with_pump() const {
    Mat5r g = gamma;
    g(2, 3) += r; // 3 -> 4
    g(3, 2) += r; // 4 -> 3
    return g;
}

double DecayNetwork::total_rate(int x) const {
    return gamma_with_pump().row(x).sum();
}

double DecayNetwork::gamma_tilde(int x, int y) const {
    return 0.5 * (total_rate(x) + total_rate(y)) + gamma_C;
}

void DecayNetwork::validate() const {
    for (int j = 0; j < 5; ++j) {
        if (gamma(j, j) != 0.0)
            throw ConfigError("DecayNetwork: diagonal gamma_jj must be zero");
        for (int k = 0; k < 5; ++k)
            if (gamma(j, k) < 0.0)
                throw ConfigError("DecayNetwork: negative decay rate gamma_" +
                                  std::to_string(j + 1) + std::to_string(k + 1));
    }
    if (gamma_C < 0.0)
        throw ConfigError("DecayNetwork: gamma_C must be non-negative");
    if (r < 0.0)
        throw ConfigError("DecayNetwork: pump rate r must be non-negative");
}

double MediumConfig::omega_b() const { return 2.0 * pi * c_cgs / (lambda_um * 1e-4); }

double MediumConfig::d43() const { return dipole_from_decay(gamma_abs, omega_b()); }

double MediumConfig::mu21() const {
    // The magnetic probe decays at alpha^2*gamma, so its moment is alpha*d43.
    return dipole_from_decay(fine_structure * fine_structure * gamma_abs, omega_b());
}

double MediumConfig::g_E() const {
    const double d = d43();
    return (8.0 * pi / 3.0) * N * d * d / (hbar_cgs * gamma_abs);
}

double MediumConfig::g_B() const {
    const double m = mu21();
    return (8.0 * pi / 3.0) * N * m * m / (hbar_cgs * gamma_abs);
}

void MediumConfig::validate() const {
    if (N < 0.0) throw ConfigError("MediumConfig: N must be non-negative");
    if (!(lambda_um > 0.0)) throw ConfigError("MediumConfig: lambda must be positive");
    if (!(gamma_abs > 0.0)) throw ConfigError("MediumConfig: gamma_abs must be positive");
}

std::vector<double> ProbeConfig::default_w_E_grid() {
    std::vector<double> g(20);
    const double lo = 1e-4, hi = 2e-3;
    for (int k = 0; k < 20; ++k) g[k] = lo + (hi - lo) * k / 19.0;
    return g;
}

void ProbeConfig::validate() const {
    if (w_E_grid.empty())
        throw ConfigError("ProbeConfig: w_E grid must be non-empty");
    double prev = 0.0;
    for (double w : w_E_grid) {
        if (w <= prev)
            throw ConfigError("ProbeConfig: w_E grid must be positive and strictly increasing");
        prev = w;
    }
    if (!(w_B > 0.0)) throw ConfigError("ProbeConfig: w_B must be positive");
    if (w_E < 0.0) throw ConfigError("ProbeConfig: w_E must be non-negative");
}

void SystemConfig::validate() const {
    levels.validate();
    drive.validate();
    decay.validate();
    medium.validate();
    probe.validate();
}

DensityMatrix DensityMatrix::level(int j) {
    DensityMatrix d;
    d.m(j, j) = 1.0;
    return d;
}

DensityMatrix DensityMatrix::maximally_mixed() {
    DensityMatrix d;
    d.m = Mat5::Identity() * 0.2;
    return d;
}

double DensityMatrix::hermiticity_error() const {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::trace_error() const { return std::abs(m.trace() - 1.0); }

double DensityMatrix::min_eigenvalue() const {
    Mat5 h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat5> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::hermitize() { m = 0.5 * (m + m.adjoint()).eval(); }

double dipole_from_decay(double gamma_ij, double omega_ij) {
    if (gamma_ij < 0.0)
        throw ConfigError("dipole_from_decay: negative decay rate");
    if (!(omega_ij > 0.0))
        throw ConfigError("dipole_from_decay: transition frequency must be positive");
    return std::sqrt(3.0 * gamma_ij * hbar_cgs * c_cgs * c_cgs * c_cgs /
                     (4.0 * omega_ij * omega_ij * omega_ij));
}

std::pair<complexd, complexd> local_fields(const DensityMatrix& rho,
                                           const MediumConfig& medium,
                                           complexd E_b, complexd B_b) {
    const double f = 4.0 * pi / 3.0;
    const complexd P = 2.0 * medium.N * medium.d43() * rho.rho43();
    const complexd M = 2.0 * medium.N * medium.mu21() * rho.rho21();
    return {E_b + f * P, B_b + f * M};
}

namespace {

// Hamiltonian at explicitly supplied dimensionless probe couplings
// u = d43*E_L/(hbar gamma) and v = mu21*B_L/(hbar gamma).
Mat5 hamiltonian_at_couplings(const SystemConfig& cfg, complexd u, complexd v) {
    const auto& dr = cfg.drive;
    Mat5 H = Mat5::Zero();

    // Rotating-frame level shifts, gauge-fixed to zero on level 1. The pair
    // detunings they generate are delta21 (1-2), delta31 (1-3),
    // delta21+Delta (3-4), delta31+Delta (2-4) and delta54 (4-5).
    const double h2 = dr.delta21;
    const double h3 = dr.delta31;
    const double h4 = dr.delta21 + cfg.levels.Delta + dr.delta31;
    const double h5 = h4 + dr.delta54;
    H(1, 1) = h2;
    H(2, 2) = h3;
    H(3, 3) = h4;
    H(4, 4) = h5;

    H(1, 0) = -0.5 * v;
    H(2, 0) = -0.5 * dr.Omega31 * std::exp(1i * dr.phi);
    H(3, 1) = -0.5 * dr.Omega42;
    H(3, 2) = -0.5 * u;
    H(4, 3) = -0.5 * cfg.Omega54();

    // Mirror the lower triangle so the result is Hermitian by construction.
    for (int c = 0; c < 5; ++c)
        for (int rw = c + 1; rw < 5; ++rw) H(c, rw) = std::conj(H(rw, c));
    return H;
}

} // namespace

Mat5 rotating_frame_generator(const DensityMatrix& rho, const SystemConfig& cfg) {
    cfg.drive.validate();

    // Bare probe amplitudes in absolute units; for sigma-/sigma+ the magnetic
    // amplitude is B_b = +-i E_b, carried here by the sign in front of w_B.
    const double hg = hbar_cgs * cfg.medium.gamma_abs;
    const double s = polarization_sign(cfg.drive.pol);
    const complexd E_b = cfg.probe.w_E * hg / cfg.medium.d43();
    const complexd B_b = 1i * s * cfg.probe.w_B * hg / cfg.medium.mu21();

    const auto [E_L, B_L] = local_fields(rho, cfg.medium, E_b, B_b);
    const complexd u = cfg.medium.d43() * E_L / hg;
    const complexd v = cfg.medium.mu21() * B_L / hg;
    return hamiltonian_at_couplings(cfg, u, v);
}

Mat5 liouvillian_rhs(const DensityMatrix& rho, const SystemConfig& cfg) {
    const Mat5 H = rotating_frame_generator(rho, cfg);
    Mat5 out = -1i * (H * rho.m - rho.m * H);

    const Mat5r g = cfg.decay.gamma_with_pump();
    Eigen::Matrix<double, 5, 1> Gamma;
    for (int x = 0; x < 5; ++x) Gamma(x) = g.row(x).sum();

    for (int x = 0; x < 5; ++x) {
        for (int y = 0; y < 5; ++y) {
            if (x == y) {
                complexd gain = 0.0;
                for (int j = 0; j < 5; ++j) gain += g(j, x) * rho.m(j, j);
                out(x, x) += gain - Gamma(x) * rho.m(x, x);
            } else {
                const double gt = 0.5 * (Gamma(x) + Gamma(y)) + cfg.decay.gamma_C;
                out(x, y) += -gt * rho.m(x, y);
            }
        }
    }
    return out;
}

Mat25 frozen_field_superoperator(const SystemConfig& cfg, complexd u, complexd v) {
    const Mat5 H = hamiltonian_at_couplings(cfg, u, v);
    Mat25 A = Mat25::Zero();
    auto idx = [](int a, int b) { return 5 * a + b; }; // row-major vec(rho)

    // Commutator part: -i (H rho - rho H).
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
            for (int k = 0; k < 5; ++k) {
                A(idx(a, b), idx(k, b)) += -1i * H(a, k);
                A(idx(a, b), idx(a, k)) += 1i * H(k, b);
            }

    const Mat5r g = cfg.decay.gamma_with_pump();
    Eigen::Matrix<double, 5, 1> Gamma;
    for (int x = 0; x < 5; ++x) Gamma(x) = g.row(x).sum();

    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) {
            if (x == y) {
                for (int j = 0; j < 5; ++j) A(idx(x, x), idx(j, j)) += g(j, x);
                A(idx(x, x), idx(x, x)) += -Gamma(x);
            } else {
                A(idx(x, y), idx(x, y)) +=
                    -(0.5 * (Gamma(x) + Gamma(y)) + cfg.decay.gamma_C);
            }
        }
    return A;
}

} // namespace nirgas
