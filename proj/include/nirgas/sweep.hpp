#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "nirgas/index.hpp"

// Sweep orchestration over (delta21, r) grids with phase-averaged response and
// branch-tracked index, plus JSON config handling and CSV/JSON export.
namespace nirgas {

inline constexpr const char* tool_version = "0.1.0";

struct SweepRange {
    double min = -30.0;
    double max = +30.0;
    int count = 201;
};

struct OutputConfig {
    std::string path = "sweep.csv";
    std::string format = "csv"; // csv | json
};

struct RunConfig {
    SystemConfig sys;             // Fig-2-style defaults
    SweepRange sweep;             // delta21 window, units gamma
    std::vector<double> pump_rates{0.0}; // ascending; branch threads along r
    SolverSettings solver;
    int phases = 16; // loop-phase samples K
    int workers = 0; // 0: one per hardware thread
    OutputConfig output;
    unsigned seed = 0; // reserved, unused

    std::vector<double> delta_values() const;
    void validate() const;
};

struct SweepRow {
    double delta21 = 0.0;
    double r = 0.0;
    bool converged = false;
    ResponseCoefficients rc; // valid only when converged
    IndexPoint pt;           // valid only when converged
    std::string error;       // failure description otherwise
};

struct SweepResult {
    nlohmann::ordered_json metadata;
    std::vector<SweepRow> rows; // sorted by (r, delta21)
    bool any_flagged = false;
};

RunConfig default_config();
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

// Column-parallel sweep; a failing grid point flags its row and the sweep
// continues. Deterministic for a fixed config regardless of worker count.
SweepResult run_sweep(const RunConfig& cfg);

void export_csv(const SweepResult& res, const std::string& path);
void export_json(const SweepResult& res, const std::string& path);

// CSV column order (17 columns), documented for consumers:
//   delta21, r, eps_re, eps_im, mu_re, mu_im, xiEH_re, xiEH_im, xiHE_re,
//   xiHE_im, n_re, n_im, fom, branch, r2_e, r2_m, converged
// Non-converged rows leave the physics fields empty rather than zero.
inline constexpr const char* csv_header =
    "delta21,r,eps_re,eps_im,mu_re,mu_im,xiEH_re,xiEH_im,xiHE_re,xiHE_im,"
    "n_re,n_im,fom,branch,r2_e,r2_m,converged";

} // namespace nirgas
