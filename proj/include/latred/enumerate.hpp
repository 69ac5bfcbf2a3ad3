#pragma once

#include <functional>
#include <vector>

#include "latred/basis.hpp"

namespace latred {

struct EnumLimits {
    long long cell_cap = 200'000'000;  // coefficient-box cells, not lattice points
};

/// All lattice points of L(B) in the ball, each exactly once, ordered
/// lexicographically by coefficient vector. The coefficient box is the
/// per-coordinate Hoelder bound |x_i - (B^{-1}t)_i| <= r * ||row_i(B^{-1})||_p'
/// with 1/p + 1/p' = 1; membership is then decided by the exact norm test.
std::vector<LatticeVector> enumerate_points(const Basis& B, const BallSpec& ball,
                                            const EnumLimits& limits = {});

/// Visits coefficient vectors only (same order); cheaper than materializing.
void enumerate_coeffs(const Basis& B, const BallSpec& ball,
                      const std::function<void(const IntVec&)>& visit,
                      const EnumLimits& limits = {});

/// Like enumerate_coeffs but also hands over ||y - center||_p^p (the max-norm
/// value for p = inf) as a long double, straight from the kernel accumulator.
void enumerate_norms(const Basis& B, const BallSpec& ball,
                     const std::function<void(const IntVec&, long double)>& visit,
                     const EnumLimits& limits = {});

Int count_points(const Basis& B, const BallSpec& ball, const EnumLimits& limits = {});

/// Number of primitive vectors (coefficient gcd 1, both signs) in the ball;
/// requires a zero center.
Int count_primitive(const Basis& B, const BallSpec& ball, const EnumLimits& limits = {});

/// Point and primitive counts at several radii in one enumeration pass.
/// radii must be sorted ascending; counts[k] corresponds to radii[k].
struct MultiCounts {
    std::vector<Int> total;
    std::vector<Int> primitive;
};
MultiCounts count_ball_multi(const Basis& B, const RatVec& center, const PNorm& p,
                             const std::vector<NormKey>& radii, const EnumLimits& limits = {});

/// Minimum-norm searches. `found` is false when the ball contains no
/// admissible point. Ties are broken deterministically:
///  - SVP order: among minimizers, first nonzero coefficient positive,
///    then lexicographically least coefficients;
///  - CVP order: the zero coefficient vector first, then the SVP order.
struct BestPoint {
    bool found = false;
    IntVec coeffs;
    NormKey key;
};

BestPoint min_norm_nonzero(const Basis& B, const BallSpec& ball, const EnumLimits& limits = {});
BestPoint min_norm_point(const Basis& B, const BallSpec& ball, const EnumLimits& limits = {});

/// Minimum over points linearly independent from dir (coefficient space).
BestPoint min_norm_independent(const Basis& B, const BallSpec& ball, const IntVec& dir,
                               const EnumLimits& limits = {});

}  // namespace latred
