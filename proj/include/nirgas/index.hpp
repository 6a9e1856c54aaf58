#pragma once

#include <optional>
#include <vector>

#include "nirgas/response.hpp"

// Complex refractive index for circular polarization,
//   n = +-sqrt(eps*mu - (xiEH+xiHE)^2/4) +- (i/2)(xiHE - xiEH),
// with the square-root branch chosen by continuity along the pump-rate path,
// seeded at the root with positive imaginary part for the passive medium.
namespace nirgas {

enum class Branch { principal, negated };

struct IndexPoint {
    complexd n{};
    complexd n2{}; // eps*mu - (xiEH+xiHE)^2/4, before the branch choice
    Branch branch = Branch::principal;
    double fom = 0.0; // |Re n / Im n|, +inf when Im n == 0
    Polarization pol = Polarization::sigma_minus;
    bool branch_point_warning = false; // |n2| ~ 0: roots indistinguishable
    // Grid coordinates, filled by sweep drivers.
    double delta21 = std::numeric_limits<double>::quiet_NaN();
    double r = std::numeric_limits<double>::quiet_NaN();
};

struct BranchStep {
    double r = 0.0;
    ResponseCoefficients rc;
    IndexPoint pt;
    double jump = 0.0;  // |n_k - n_{k-1}|
    bool flagged = false; // jump large against the n^2 change: missed crossing?
};

struct BranchPath {
    std::vector<BranchStep> steps;
    bool any_flagged() const;
};

double figure_of_merit(complexd n);

// Root selection: without prev, the root with the larger imaginary part
// (passive initialization); with prev, the root nearest to prev. The
// polarization-odd chirality term is added after the choice.
IndexPoint refractive_index(const ResponseCoefficients& rc, Polarization pol,
                            std::optional<complexd> prev = std::nullopt);

// Sequential refractive_index along a strictly ascending pump-rate path,
// threading each selected root into the next choice.
BranchPath track_branch(const std::vector<std::pair<double, ResponseCoefficients>>& path,
                        Polarization pol);

} // namespace nirgas
