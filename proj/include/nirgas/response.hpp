#pragma once

#include <vector>

#include "nirgas/atomsys.hpp"
#include "nirgas/steady.hpp"

// Linear-response extraction: sweep the electric probe amplitude at fixed
// magnetic amplitude, regress the induced polarization and magnetization
// against w_E, and convert slope/intercept into the four response
// coefficients. The loop phase is averaged over to model an experiment
// without phase control.
namespace nirgas {

struct GridPointError : std::runtime_error {
    double w_E;
    double phi;
    GridPointError(double w_E_, double phi_, const std::string& what_);
};

struct CoherenceSample {
    double w_E;
    complexd rho21;
    complexd rho43;
};

struct RegressionFit {
    complexd m{};          // slope
    complexd b{};          // intercept
    double r2 = 0.0;       // min of the real- and imaginary-part R^2
    double residual_norm = 0.0;
};

struct ResponseCoefficients {
    complexd chiEE{}, chiHH{}, xiEH{}, xiHE{};
    double r2E = 1.0, r2M = 1.0; // worst fit quality across phases
    int phase_count = 1;
    // Diagnostics of the phase average: largest single-phase chirality
    // magnitudes and the spread of eps/mu across phases.
    double max_single_phase_xiEH = 0.0;
    double max_single_phase_xiHE = 0.0;
    double spread_eps = 0.0;
    double spread_mu = 0.0;

    complexd eps() const { return 1.0 + 4.0 * pi * chiEE; }
    complexd mu() const { return 1.0 + 4.0 * pi * chiHH; }
};

// Steady states across the w_E grid at one loop phase; solutions are threaded
// as warm starts along the grid. A non-converged point throws GridPointError.
std::vector<CoherenceSample> extract_coherences(const SystemConfig& cfg,
                                                double phi,
                                                const SolverSettings& s = {});

// Independent least squares on real and imaginary parts over (x, y) pairs.
RegressionFit regress_linear(const std::vector<std::pair<double, complexd>>& pts);

// Convert the polarization fit P(w_E) = m_P w_E + b_P and the magnetization
// fit M(w_E) = m_M w_E + b_M into response coefficients:
//   chiEE = d43 m_P/(hbar gamma),  xiEH = -s 4pi i mu21 b_P/(hbar gamma w_B),
//   chiHH = -s i mu21 b_M/(hbar gamma w_B),  xiHE = 4pi d43 m_M/(hbar gamma),
// with s = +1 (sigma-) or -1 (sigma+).
ResponseCoefficients response_from_fits(const RegressionFit& fitP,
                                        const RegressionFit& fitM,
                                        const MediumConfig& medium,
                                        const ProbeConfig& probe,
                                        Polarization pol);

// Full extraction at a single loop phase: coherences -> P, M -> fits ->
// coefficients.
ResponseCoefficients single_phase_response(const SystemConfig& cfg, double phi,
                                           const SolverSettings& s = {});

// Arithmetic average of the coefficients over K equidistant loop phases
// (eps and mu are averaged as chi and shifted by one afterwards).
ResponseCoefficients phase_averaged_response(const SystemConfig& cfg, int K,
                                             const SolverSettings& s = {});

} // namespace nirgas
