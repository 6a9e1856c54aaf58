#include "nirgas/steady.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nirgas {

using namespace std::complex_literals;

void SolverSettings::validate() const {
    if (!(atol > 0.0) || !(eta > 0.0))
        throw ConfigError("SolverSettings: tolerances must be positive");
    if (!(t_max > 0.0))
        throw ConfigError("SolverSettings: t_max must be positive");
    if (max_iterations < 1)
        throw ConfigError("SolverSettings: max_iterations must be at least 1");
    if (!(damping > 0.0) || damping > 1.0)
        throw ConfigError("SolverSettings: damping must lie in (0, 1]");
}

namespace {

double frob(const Mat5& m) { return m.norm(); }

// Fastest frequency scale retained in the rotating frame; the step ceiling
// 0.1/scale guards explicit-stepper stability (at the default parameters this
// is 0.1/Omega54).
double fastest_scale(const SystemConfig& cfg) {
    const auto& dr = cfg.drive;
    double s = 1.0;
    s = std::max(s, std::abs(cfg.Omega54()));
    s = std::max(s, std::abs(dr.Omega42));
    s = std::max(s, std::abs(dr.Omega31));
    const double h4 = std::abs(dr.delta21) + cfg.levels.Delta + std::abs(dr.delta31);
    s = std::max({s, std::abs(dr.delta21), std::abs(dr.delta31), h4,
                  h4 + std::abs(dr.delta54)});
    double gmax = 0.0;
    for (int x = 0; x < 5; ++x) gmax = std::max(gmax, cfg.decay.total_rate(x));
    s = std::max(s, gmax + cfg.decay.gamma_C);
    return s;
}

} // namespace

SteadyResult integrate_to_steady(const DensityMatrix& rho0,
                                 const SystemConfig& cfg,
                                 const SolverSettings& s) {
    s.validate();
    cfg.validate();

    // Dormand-Prince 5(4) with the first-same-as-last property: k7 is the rhs
    // at the accepted point and doubles as both the steady-state residual and
    // the next step's k1. The generator is autonomous, so no stage times.
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    SteadyResult out;
    out.method = SteadyMethod::time_integration;

    DensityMatrix y = rho0;
    y.hermitize();

    auto rhs = [&cfg](const Mat5& m) {
        DensityMatrix d;
        d.m = m;
        return liouvillian_rhs(d, cfg);
    };

    Mat5 k1 = rhs(y.m);
    double res = frob(k1);
    if (res < s.eta) {
        out.rho = y;
        out.converged = true;
        out.residual = res;
        return out;
    }

    const double hmax = 0.1 / fastest_scale(cfg);
    double h = hmax / 10.0;
    double t = 0.0;
    long accepted = 0;

    while (t < s.t_max) {
        h = std::min(h, s.t_max - t);

        const Mat5 k2 = rhs(y.m + h * (a21 * k1));
        const Mat5 k3 = rhs(y.m + h * (a31 * k1 + a32 * k2));
        const Mat5 k4 = rhs(y.m + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Mat5 k5 = rhs(y.m + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Mat5 k6 =
            rhs(y.m + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Mat5 ynew =
            y.m + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Mat5 k7 = rhs(ynew);

        const Mat5 err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double errnorm = err.cwiseAbs().maxCoeff() / s.atol;

        if (errnorm <= 1.0) {
            t += h;
            y.m = ynew;
            y.hermitize();
            ++accepted;
            k1 = k7; // FSAL

            if (y.trace_error() > 1e-8)
                throw NumericalFailure(
                    "integrate_to_steady: trace drifted beyond 1e-8");

            res = frob(k7);
            if (res < s.eta) {
                out.rho = y;
                out.converged = true;
                out.residual = res;
                out.iterations = accepted;
                return out;
            }
            const double fac =
                std::clamp(0.9 * std::pow(std::max(errnorm, 1e-10), -0.2), 0.2, 5.0);
            h = std::min(h * fac, hmax);
        } else {
            const double fac =
                std::clamp(0.9 * std::pow(errnorm, -0.2), 0.2, 1.0);
            h *= fac;
            if (h < 1e-13 * std::max(1.0, t))
                throw NumericalFailure("integrate_to_steady: step size underflow");
        }
    }

    out.rho = y;
    out.converged = false;
    out.residual = res;
    out.iterations = accepted;
    return out;
}

namespace {

// Direction superoperators d(superoperator)/d{Re u, Im u, Re v, Im v}: the
// couplings enter the Hamiltonian linearly, so these four matrices are
// constant and shared by every configuration.
const std::array<Mat25, 4>& coupling_directions() {
    static const std::array<Mat25, 4> dirs = [] {
        std::array<Mat25, 4> out;
        auto idx = [](int a, int b) { return 5 * a + b; };
        int n = 0;
        for (auto [rw, cl] : {std::pair{3, 2}, std::pair{1, 0}}) {
            for (int im = 0; im < 2; ++im) {
                Mat5 dH = Mat5::Zero();
                dH(rw, cl) = im ? complexd{0.0, -0.5} : complexd{-0.5, 0.0};
                dH(cl, rw) = std::conj(dH(rw, cl));
                Mat25 dA = Mat25::Zero();
                for (int a = 0; a < 5; ++a)
                    for (int b = 0; b < 5; ++b)
                        for (int k = 0; k < 5; ++k) {
                            dA(idx(a, b), idx(k, b)) += -1i * dH(a, k);
                            dA(idx(a, b), idx(a, k)) += 1i * dH(k, b);
                        }
                out[n++] = dA;
            }
        }
        return out;
    }();
    return dirs;
}

constexpr int kRho43 = 5 * 3 + 2; // flat index of rho(3,2) in vec(rho)
constexpr int kRho21 = 5 * 1 + 0;

// Exact steady state of the field-frozen (linear) master equation: null
// vector of the superoperator, with the redundant d rho11/dt row replaced by
// the trace-1 constraint.
Vec25 frozen_field_steady(const SystemConfig& cfg, complexd u, complexd v,
                          Eigen::PartialPivLU<Mat25>& lu) {
    Mat25 A = frozen_field_superoperator(cfg, u, v);
    A.row(0).setZero();
    for (int j = 0; j < 5; ++j) A(0, 6 * j) = 1.0;
    Vec25 b = Vec25::Zero();
    b(0) = 1.0;

    lu.compute(A);
    Vec25 x = lu.solve(b);
    const double rel = (A * x - b).norm() / std::max(1.0, x.norm());
    if (!x.allFinite() || rel > 1e-8)
        throw NumericalFailure(
            "self_consistent_steady: degenerate trace-constrained linear system "
            "(solve residual " + std::to_string(rel) + ")");
    return x;
}

DensityMatrix density_from_vec(const Vec25& x) {
    DensityMatrix rho;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) rho.m(a, b) = x(5 * a + b);
    rho.hermitize();
    rho.m /= rho.m.trace().real();
    return rho;
}

} // namespace

SteadyResult self_consistent_steady(const DensityMatrix& rho0,
                                    const SystemConfig& cfg,
                                    const SolverSettings& s) {
    s.validate();
    cfg.validate();

    SteadyResult out;
    out.method = SteadyMethod::self_consistent;

    const double gE = cfg.medium.g_E();
    const double gB = cfg.medium.g_B();
    const complexd bareE = cfg.probe.w_E;
    const complexd bareB =
        1i * polarization_sign(cfg.drive.pol) * cfg.probe.w_B;

    // Unknowns are the two local couplings; the density matrix is an exact
    // function of them through the linear solve.
    complexd u = bareE + gE * rho0.rho43();
    complexd v = bareB + gB * rho0.rho21();

    Eigen::PartialPivLU<Mat25> lu;
    Vec25 x = frozen_field_steady(cfg, u, v, lu);
    long iters = 1;

    auto field_residual = [&](const Vec25& xx, complexd uu, complexd vv) {
        return std::array<complexd, 2>{bareE + gE * xx(kRho43) - uu,
                                       bareB + gB * xx(kRho21) - vv};
    };
    auto norm2 = [](const std::array<complexd, 2>& F) {
        return std::sqrt(std::norm(F[0]) + std::norm(F[1]));
    };

    auto F = field_residual(x, u, v);
    const double ftol = 1e-12 * std::max({1.0, std::abs(u), std::abs(v)});
    bool fields_ok = norm2(F) < ftol;

    if (s.scf_algorithm == ScfAlgorithm::newton) {
        while (!fields_ok && iters < s.max_iterations) {
            // Analytic Jacobian of the field residual: each direction costs
            // one extra triangular solve with the already-factored system.
            Eigen::Matrix4d J;
            const auto& dirs = coupling_directions();
            for (int k = 0; k < 4; ++k) {
                Vec25 w = dirs[k] * x;
                w(0) = 0.0; // the trace row does not move with the couplings
                const Vec25 y = -lu.solve(w);
                complexd dF1 = gE * y(kRho43);
                complexd dF2 = gB * y(kRho21);
                if (k == 0) dF1 -= 1.0;
                if (k == 1) dF1 -= 1i;
                if (k == 2) dF2 -= 1.0;
                if (k == 3) dF2 -= 1i;
                J(0, k) = dF1.real();
                J(1, k) = dF1.imag();
                J(2, k) = dF2.real();
                J(3, k) = dF2.imag();
            }
            Eigen::Vector4d rhsv(-F[0].real(), -F[0].imag(), -F[1].real(),
                                 -F[1].imag());
            const Eigen::Vector4d dz = J.partialPivLu().solve(rhsv);
            if (!dz.allFinite())
                throw NumericalFailure(
                    "self_consistent_steady: singular field Jacobian");

            // Backtracking on the residual norm keeps the iteration stable
            // when the starting couplings are far from the fixed point.
            const double base = norm2(F);
            double step = 1.0;
            while (true) {
                const complexd ut = u + step * complexd{dz(0), dz(1)};
                const complexd vt = v + step * complexd{dz(2), dz(3)};
                const Vec25 xt = frozen_field_steady(cfg, ut, vt, lu);
                ++iters;
                const auto Ft = field_residual(xt, ut, vt);
                if (norm2(Ft) < base * (1.0 - 0.25 * step) || step < 1e-3) {
                    u = ut;
                    v = vt;
                    x = xt;
                    F = Ft;
                    break;
                }
                step *= 0.5;
            }
            fields_ok = norm2(F) < ftol;
        }
    } else {
        while (!fields_ok && iters < s.max_iterations) {
            const complexd unew = bareE + gE * x(kRho43);
            const complexd vnew = bareB + gB * x(kRho21);
            u = (1.0 - s.damping) * u + s.damping * unew;
            v = (1.0 - s.damping) * v + s.damping * vnew;
            x = frozen_field_steady(cfg, u, v, lu);
            ++iters;
            F = field_residual(x, u, v);
            fields_ok = norm2(F) < ftol;
        }
    }

    out.rho = density_from_vec(x);
    out.iterations = iters;
    DensityMatrix check = out.rho;
    out.residual = liouvillian_rhs(check, cfg).norm();
    out.converged = fields_ok && out.residual < s.eta;
    return out;
}

SteadyResult solve_steady(const DensityMatrix& rho0, const SystemConfig& cfg,
                          const SolverSettings& s) {
    return s.method == SteadyMethod::time_integration
               ? integrate_to_steady(rho0, cfg, s)
               : self_consistent_steady(rho0, cfg, s);
}

} // namespace nirgas
