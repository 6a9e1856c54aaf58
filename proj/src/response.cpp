#include "nirgas/response.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nirgas {

using namespace std::complex_literals;

GridPointError::GridPointError(double w_E_, double phi_, const std::string& what_)
    : std::runtime_error("grid point w_E=" + std::to_string(w_E_) +
                         ", phi=" + std::to_string(phi_) + ": " + what_),
      w_E(w_E_),
      phi(phi_) {}

std::vector<CoherenceSample> extract_coherences(const SystemConfig& cfg,
                                                double phi,
                                                const SolverSettings& s) {
    std::vector<CoherenceSample> out;
    out.reserve(cfg.probe.w_E_grid.size());

    DensityMatrix warm = DensityMatrix::ground();
    for (double w : cfg.probe.w_E_grid) {
        SystemConfig point = cfg;
        point.probe.w_E = w;
        point.drive.phi = phi;
        SteadyResult res;
        try {
            res = solve_steady(warm, point, s);
        } catch (const NumericalFailure& e) {
            throw GridPointError(w, phi, e.what());
        }
        if (!res.converged) {
            std::ostringstream msg;
            msg << "steady state did not converge (residual " << res.residual
                << " after " << res.iterations << " iterations)";
            throw GridPointError(w, phi, msg.str());
        }
        warm = res.rho; // threads the solution along the amplitude grid
        out.push_back({w, res.rho.rho21(), res.rho.rho43()});
    }
    return out;
}

RegressionFit regress_linear(const std::vector<std::pair<double, complexd>>& pts) {
    const auto n = pts.size();
    if (n < 3)
        throw ConfigError("regress_linear: need at least 3 points");
    const double x0 = pts.front().first;
    const bool all_equal = std::all_of(pts.begin(), pts.end(), [&](const auto& p) {
        return p.first == x0;
    });
    if (all_equal)
        throw ConfigError("regress_linear: abscissae must not all coincide");

    double sx = 0.0, sxx = 0.0;
    complexd sy = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sxx += x * x;
        sy += y;
        sxy += x * y;
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sxx - sx * sx;

    RegressionFit fit;
    fit.m = (nn * sxy - sx * sy) / det;
    fit.b = (sxx * sy - sx * sxy) / det;

    // R^2 per quadrature. A quadrature whose variation across the grid falls
    // below ~3e-8 of the overall sample magnitude is flat at the steady-state
    // solver's resolution (residual threshold ~1e-9): whatever scatter it
    // carries is solver noise, not signal, so it counts as constant and
    // perfectly explained. Observed noise variance sits at 1e-21..1e-18 of
    // the squared magnitude; the smallest genuine quadrature seen on the
    // default grid is ~3e-14, so the 1e-15 cut separates the two populations
    // by more than a decade on either side.
    const complexd ybar = sy / nn;
    double ss_res_re = 0.0, ss_res_im = 0.0, ss_tot_re = 0.0, ss_tot_im = 0.0;
    double sq = 0.0;
    for (const auto& [x, y] : pts) {
        const complexd r = y - (fit.m * x + fit.b);
        ss_res_re += r.real() * r.real();
        ss_res_im += r.imag() * r.imag();
        const complexd d = y - ybar;
        ss_tot_re += d.real() * d.real();
        ss_tot_im += d.imag() * d.imag();
        sq += std::norm(y);
    }
    const double floor_ = 1e-15 * sq + 1e-300;
    auto r2_of = [floor_](double res, double tot) {
        if (tot <= floor_) return res <= floor_ ? 1.0 : 0.0;
        return 1.0 - res / tot;
    };
    fit.r2 = std::min(r2_of(ss_res_re, ss_tot_re), r2_of(ss_res_im, ss_tot_im));
    fit.residual_norm = std::sqrt(ss_res_re + ss_res_im);
    return fit;
}

ResponseCoefficients response_from_fits(const RegressionFit& fitP,
                                        const RegressionFit& fitM,
                                        const MediumConfig& medium,
                                        const ProbeConfig& probe,
                                        Polarization pol) {
    const double hg = hbar_cgs * medium.gamma_abs;
    const double s = polarization_sign(pol);
    const double d43 = medium.d43();
    const double mu21 = medium.mu21();
    if (probe.w_B == 0.0)
        throw ConfigError("response_from_fits: w_B must be nonzero");

    ResponseCoefficients rc;
    rc.chiEE = d43 * fitP.m / hg;
    rc.xiEH = -s * 4.0 * pi * 1i * mu21 * fitP.b / (hg * probe.w_B);
    rc.chiHH = -s * 1i * mu21 * fitM.b / (hg * probe.w_B);
    rc.xiHE = 4.0 * pi * d43 * fitM.m / hg;
    rc.r2E = fitP.r2;
    rc.r2M = fitM.r2;
    rc.max_single_phase_xiEH = std::abs(rc.xiEH);
    rc.max_single_phase_xiHE = std::abs(rc.xiHE);
    return rc;
}

ResponseCoefficients single_phase_response(const SystemConfig& cfg, double phi,
                                           const SolverSettings& s) {
    const auto samples = extract_coherences(cfg, phi, s);
    const double pref_P = 2.0 * cfg.medium.N * cfg.medium.d43();
    const double pref_M = 2.0 * cfg.medium.N * cfg.medium.mu21();

    std::vector<std::pair<double, complexd>> ptsP, ptsM;
    ptsP.reserve(samples.size());
    ptsM.reserve(samples.size());
    for (const auto& smp : samples) {
        ptsP.emplace_back(smp.w_E, pref_P * smp.rho43);
        ptsM.emplace_back(smp.w_E, pref_M * smp.rho21);
    }
    return response_from_fits(regress_linear(ptsP), regress_linear(ptsM),
                              cfg.medium, cfg.probe, cfg.drive.pol);
}

ResponseCoefficients phase_averaged_response(const SystemConfig& cfg, int K,
                                             const SolverSettings& s) {
    if (K < 1)
        throw ConfigError("phase_averaged_response: K must be at least 1");

    std::vector<ResponseCoefficients> per_phase;
    per_phase.reserve(K);
    for (int k = 0; k < K; ++k)
        per_phase.push_back(
            single_phase_response(cfg, 2.0 * pi * k / K, s));

    ResponseCoefficients avg;
    avg.phase_count = K;
    avg.r2E = 1.0;
    avg.r2M = 1.0;
    for (const auto& rc : per_phase) {
        avg.chiEE += rc.chiEE;
        avg.chiHH += rc.chiHH;
        avg.xiEH += rc.xiEH;
        avg.xiHE += rc.xiHE;
        avg.r2E = std::min(avg.r2E, rc.r2E);
        avg.r2M = std::min(avg.r2M, rc.r2M);
        avg.max_single_phase_xiEH =
            std::max(avg.max_single_phase_xiEH, std::abs(rc.xiEH));
        avg.max_single_phase_xiHE =
            std::max(avg.max_single_phase_xiHE, std::abs(rc.xiHE));
    }
    const double kk = static_cast<double>(K);
    avg.chiEE /= kk;
    avg.chiHH /= kk;
    avg.xiEH /= kk;
    avg.xiHE /= kk;
    for (const auto& rc : per_phase) {
        avg.spread_eps = std::max(avg.spread_eps, std::abs(rc.eps() - avg.eps()));
        avg.spread_mu = std::max(avg.spread_mu, std::abs(rc.mu() - avg.mu()));
    }
    return avg;
}

} // namespace nirgas
