#pragma once

#include <limits>

#include "nirgas/atomsys.hpp"

// Steady-state solvers for the nonlinear master equation: adaptive explicit
// time integration, and a self-consistent solver that exploits the fact that
// the equation is linear once the two local field couplings are frozen.
namespace nirgas {

enum class SteadyMethod { time_integration, self_consistent };
enum class ScfAlgorithm { newton, damped_picard };

struct SolverSettings {
    SteadyMethod method = SteadyMethod::self_consistent;
    double atol = 1e-10;      // per-entry local error target of the integrator
    double eta = 1e-9;        // steady-state residual ||rhs||_F threshold
    double t_max = 1e6;       // integration horizon, units 1/gamma
    int max_iterations = 500; // fixed-point / Newton iteration cap
    double damping = 0.5;     // step factor for the damped-picard algorithm
    ScfAlgorithm scf_algorithm = ScfAlgorithm::newton;

    void validate() const;
};

struct SteadyResult {
    DensityMatrix rho;
    bool converged = false;
    double residual = std::numeric_limits<double>::quiet_NaN();
    long iterations = 0; // accepted steps or solver iterations
    SteadyMethod method = SteadyMethod::self_consistent;
};

// Dormand-Prince 5(4) integration of drho/dt until ||rhs||_F < eta or t_max.
// The step ceiling follows the fastest scale retained in the rotating frame
// (of order Omega54 at the default parameters). Running out of t_max yields
// converged = false; trace drift beyond 1e-8 throws NumericalFailure.
SteadyResult integrate_to_steady(const DensityMatrix& rho0,
                                 const SystemConfig& cfg,
                                 const SolverSettings& s);

// Self-consistent solve: freeze the two local couplings, solve the then-linear
// steady state exactly (25-dim superoperator with a trace-1 row), update the
// couplings from the solution, repeat. The default update is a Newton step on
// the coupling pair with an analytic Jacobian; scf_algorithm selects the
// damped fixed-point variant instead. A degenerate linear system throws
// NumericalFailure; hitting the iteration cap returns converged = false.
SteadyResult self_consistent_steady(const DensityMatrix& rho0,
                                    const SystemConfig& cfg,
                                    const SolverSettings& s);

// Dispatch on s.method.
SteadyResult solve_steady(const DensityMatrix& rho0, const SystemConfig& cfg,
                          const SolverSettings& s);

} // namespace nirgas
