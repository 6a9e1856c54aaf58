#include "nirgas/index.hpp"

#include <cmath>
#include <limits>

namespace nirgas {

using namespace std::complex_literals;

bool BranchPath::any_flagged() const {
    for (const auto& st : steps)
        if (st.flagged) return true;
    return false;
}

double figure_of_merit(complexd n) {
    if (n.imag() == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(n.real() / n.imag());
}

namespace {

// Polarization-odd chirality contribution, added after the root choice.
complexd chirality_shift(const ResponseCoefficients& rc, Polarization pol) {
    const double sign = pol == Polarization::sigma_plus ? +1.0 : -1.0;
    return sign * 0.5i * (rc.xiHE - rc.xiEH);
}

} // namespace

IndexPoint refractive_index(const ResponseCoefficients& rc, Polarization pol,
                            std::optional<complexd> prev) {
    IndexPoint pt;
    pt.pol = pol;
    pt.n2 = rc.eps() * rc.mu() - 0.25 * (rc.xiEH + rc.xiHE) * (rc.xiEH + rc.xiHE);
    pt.branch_point_warning = std::abs(pt.n2) < 1e-14;

    const complexd principal = std::sqrt(pt.n2);
    const complexd negated = -principal;

    complexd root;
    if (prev) {
        // Continuity: stay on the branch closest to the previous root.
        root = std::abs(principal - *prev) <= std::abs(negated - *prev)
                   ? principal
                   : negated;
    } else {
        // Passive seed: absorbing medium, Im n >= 0.
        root = principal.imag() >= negated.imag() ? principal : negated;
    }
    pt.branch = root == principal ? Branch::principal : Branch::negated;
    pt.n = root + chirality_shift(rc, pol);
    pt.fom = figure_of_merit(pt.n);
    return pt;
}

BranchPath track_branch(
    const std::vector<std::pair<double, ResponseCoefficients>>& path,
    Polarization pol) {
    for (size_t k = 1; k < path.size(); ++k)
        if (!(path[k].first > path[k - 1].first))
            throw ConfigError("track_branch: pump rates must be strictly ascending");

    BranchPath out;
    out.steps.reserve(path.size());
    std::optional<complexd> prev_root;
    for (const auto& [r, rc] : path) {
        BranchStep st;
        st.r = r;
        st.rc = rc;
        st.pt = refractive_index(rc, pol, prev_root);
        st.pt.r = r;
        const complexd root = st.pt.n - chirality_shift(rc, pol);
        if (!out.steps.empty()) {
            const auto& last = out.steps.back();
            st.jump = std::abs(st.pt.n - last.pt.n);
            // A jump much larger than the n^2 change indicates the continuity
            // rule hopped branches between too-coarse pump samples.
            const double scale = std::sqrt(std::abs(st.pt.n2 - last.pt.n2));
            st.flagged = st.jump > 1e-12 + 10.0 * scale;
        }
        prev_root = root;
        out.steps.push_back(std::move(st));
    }
    return out;
}

} // namespace nirgas
