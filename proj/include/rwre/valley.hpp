#pragma once

#include <cstdint>
#include <vector>

#include "rwre/environment.hpp"
#include "rwre/walk.hpp"

namespace rwre {

// Bottom b and right border c of the depth-h valley of the potential:
//   c = min{ x >= 0 : V(x) - min_{0<=y<=x} V(y) >= h }
//   b = min{ x >= 0 : V(x) = min_{0<=y<=c} V(y) }
struct Valley {
    int b = 0;
    int c = 0;
    double depth_threshold = 0.0;  // the h that defined c
};

// Throws ValleyNotClosedError if no such c exists inside the profile window.
Valley find_valley(const PotentialProfile& prof, double h);

// Deep-site decomposition at horizon n and parameter delta:
//   G = { x <= b : max_{z in [x,b]} V(z) - V(x) >= delta log n }
//   D = ( b, c_delta ]  with  max_{z in [b,x]} V(z) - V(b) <= (1-delta) log n
//   R_delta = G union D
struct ValleyDecomposition {
    Valley valley;
    double delta = 0.0;
    std::int64_t n = 0;
    std::vector<int> g;  // sorted ascending
    int d_lo = 1;        // D = {d_lo..d_hi}; empty when d_hi < d_lo
    int d_hi = 0;

    std::vector<int> r_delta() const;
    std::int64_t size() const;
    bool contains(int x) const;
};

ValleyDecomposition deep_sites(const PotentialProfile& prof, const Valley& valley,
                               std::int64_t n, double delta);

// Localization diagnostic: true iff every x in R_delta has xi(n-1,x) >= n^(delta/2).
bool deep_site_event(const WalkStats& stats, const ValleyDecomposition& decomp,
                     std::int64_t n, double delta);

}  // namespace rwre
