#include "rwre/valley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwre/errors.hpp"

namespace rwre {

Valley find_valley(const PotentialProfile& prof, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("find_valley: threshold must be positive");
    double running_min = prof.v[0];
    int argmin = 0;
    for (int x = 0; x <= prof.x_max(); ++x) {
        if (prof.v[x] < running_min) {
            running_min = prof.v[x];
            argmin = x;
        }
        if (prof.v[x] - running_min >= h) return Valley{argmin, x, h};
    }
    throw ValleyNotClosedError("valley of requested depth does not close in the window");
}

std::vector<int> ValleyDecomposition::r_delta() const {
    std::vector<int> sites(g);
    for (int x = d_lo; x <= d_hi; ++x) sites.push_back(x);
    return sites;
}

std::int64_t ValleyDecomposition::size() const {
    return static_cast<std::int64_t>(g.size()) + std::max(0, d_hi - d_lo + 1);
}

bool ValleyDecomposition::contains(int x) const {
    if (x >= d_lo && x <= d_hi) return true;
    return std::binary_search(g.begin(), g.end(), x);
}

ValleyDecomposition deep_sites(const PotentialProfile& prof, const Valley& valley,
                               std::int64_t n, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("deep_sites: delta outside (0,1)");
    if (valley.b < 0 || valley.b > prof.x_max())
        throw std::invalid_argument("deep_sites: bottom outside the profile window");
    const double logn = std::log(static_cast<double>(n));
    const int b = valley.b;

    ValleyDecomposition out;
    out.valley = valley;
    out.delta = delta;
    out.n = n;

    // Left part: running max of V over [x, b], scanning x downward.
    double running_max = prof.v[b];
    for (int x = b; x >= 0; --x) {
        if (prof.v[x] > running_max) running_max = prof.v[x];
        if (running_max - prof.v[x] >= delta * logn) out.g.push_back(x);
    }
    std::reverse(out.g.begin(), out.g.end());

    // Right part: interval (b, c_delta], closed by the first exceedance.
    out.d_lo = b + 1;
    out.d_hi = b;
    running_max = prof.v[b];
    for (int x = b + 1; x <= prof.x_max(); ++x) {
        if (prof.v[x] > running_max) running_max = prof.v[x];
        if (running_max - prof.v[b] > (1.0 - delta) * logn) break;
        out.d_hi = x;
    }
    return out;
}

bool deep_site_event(const WalkStats& stats, const ValleyDecomposition& decomp,
                     std::int64_t n, double delta) {
    if (n != decomp.n || delta != decomp.delta)
        throw std::invalid_argument("deep_site_event: (n, delta) disagree with decomposition");
    const double need = std::pow(static_cast<double>(n), delta / 2.0);
    auto count_of = [&](int x) -> std::int64_t {
        if (x < 0 || static_cast<std::size_t>(x) >= stats.xi.size()) return 0;
        return stats.xi[static_cast<std::size_t>(x)];
    };
    for (int x : decomp.g) {
        if (static_cast<double>(count_of(x)) < need) return false;
    }
    for (int x = decomp.d_lo; x <= decomp.d_hi; ++x) {
        if (static_cast<double>(count_of(x)) < need) return false;
    }
    return true;
}

}  // namespace rwre
