#pragma once

// Brute-force reference computations used by the tests. None of these call
// into the code paths they check beyond plain data accessors.

#include "dnabrick/canvas.hpp"
#include "dnabrick/layout.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

using namespace dnabrick;

using DomainKey = std::tuple<int, int, int, int>; // x, y, k, side

inline DomainKey key(const DomainId& d)
{
    return {d.voxel.x, d.voxel.y, d.voxel.k, d.side == Side::plus ? 0 : 1};
}

/// Every (voxel, side) of the selected voxels, as a multiset keyed by count.
inline std::map<DomainKey, int> required_domains(const CanvasSpec& spec,
                                                 const std::set<std::tuple<int, int, int>>& removed)
{
    std::map<DomainKey, int> out;
    for (int x = 0; x < spec.width_helices; ++x)
        for (int y = 0; y < spec.height_helices; ++y)
            for (int k = 0; k < spec.depth_bp / 8; ++k) {
                if (removed.count({x, y, k}))
                    continue;
                out[{x, y, k, 0}] = 1;
                out[{x, y, k, 1}] = 1;
            }
    return out;
}

inline std::map<DomainKey, int> covered_domains(const std::vector<Brick>& bricks)
{
    std::map<DomainKey, int> out;
    for (const auto& b : bricks)
        for (const auto& d : b.domains)
            ++out[key(d)];
    return out;
}

struct Counts {
    long full = 0;
    long half = 0;
};

/// Slab tiling counts by direct enumeration of helix adjacencies per layer pair.
inline Counts slab_counts(int w, int h, int layers)
{
    Counts c;
    for (int p = 0; p < layers / 2; ++p) {
        const bool along_x = p % 2 == 0;
        for (int x = 0; x < w; ++x)
            for (int y = 0; y < h; ++y) {
                const int nx = along_x ? x + 1 : x;
                const int ny = along_x ? y : y + 1;
                if (nx < w && ny < h)
                    ++c.full; // minus segment of (x,y) pairs with plus segment of next
                else
                    ++c.half; // minus segment left at the row end
                const int px = along_x ? x - 1 : x;
                const int py = along_x ? y : y - 1;
                if (px < 0 || py < 0)
                    ++c.half; // plus segment with no predecessor
            }
    }
    return c;
}

inline int char_identity(const std::string& a, const std::string& b)
{
    int same = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        same += a[i] == b[i];
    return same;
}

struct Hist {
    long p8 = 0, p7 = 0, p6 = 0;
};

inline Hist brute_histogram(const std::vector<std::string>& ds)
{
    Hist h;
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = i + 1; j < ds.size(); ++j) {
            const int s = char_identity(ds[i], ds[j]);
            if (s == 8) ++h.p8;
            if (s == 7) ++h.p7;
            if (s == 6) ++h.p6;
        }
    return h;
}

inline std::string brute_revcomp(const std::string& s)
{
    std::string out(s.rbegin(), s.rend());
    for (auto& c : out)
        c = c == 'A' ? 'T' : c == 'T' ? 'A' : c == 'C' ? 'G' : 'C';
    return out;
}

inline int char_gc(const std::string& s)
{
    return static_cast<int>(std::count_if(s.begin(), s.end(), [](char c) { return c == 'G' || c == 'C'; }));
}

inline int char_longest_run(const std::string& s)
{
    int best = 0, cur = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        cur = (i && s[i] == s[i - 1]) ? cur + 1 : 1;
        best = std::max(best, cur);
    }
    return best;
}

inline std::string random_domain(std::mt19937_64& rng)
{
    static const char bases[] = "ACGT";
    std::string s(8, 'A');
    for (auto& c : s)
        c = bases[rng() % 4];
    return s;
}

} // namespace oracle
