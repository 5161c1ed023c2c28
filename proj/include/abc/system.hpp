#pragma once

#include "abc/mapnode.hpp"
#include "abc/params.hpp"

#include <cstdint>
#include <vector>

namespace abc {

// T = H o R_alpha o H^{-1} with alpha = alpha_{n+1}.
struct AbCSystem {
    MapPtr H;
    BigRational alpha_next;
    StageParams stage;
};

AbCSystem make_system(MapPtr H, const StageParams& stage);
AbCSystem rotation_system(const BigRational& alpha);

// Exact t*alpha mod 1 for alpha = p/q, returned as a double in [0,1).
class RotationClock {
public:
    explicit RotationClock(const BigRational& alpha);
    double offset(uint64_t t) const;

private:
    bool small_;
    uint64_t p_ = 0, q_ = 1;
    BigInt P_, Q_;
};

// T^t(x) for t = 0, stride, 2 stride, ... < L.
std::vector<Pt> orbit(const AbCSystem& sys, Pt x, uint64_t L, uint64_t stride = 1);
// Same orbit given u = H^{-1}(x) directly.
std::vector<Pt> orbit_from_preimage(const AbCSystem& sys, Pt u, uint64_t L, uint64_t stride = 1);
// T applied L-1 times by composition; for cross-checks.
std::vector<Pt> orbit_naive(const AbCSystem& sys, Pt x, uint64_t L);
Pt apply_T(const AbCSystem& sys, Pt x);

uint64_t sample_count(uint64_t L, uint64_t stride);

struct JacobianStats {
    double mean_abs = 0;
    double max_abs = 0;
    long used = 0;
    long excluded = 0;
};

// Central-difference determinant of the forward map at uniform random points.
JacobianStats jacobian_mc(const MapNode& node, long samples, double fd_step, uint64_t seed = 1);

// Index 0 <= i < q_n closest to sum_{m<n} 1/(2 q_m); chain holds stages 1..n.
long central_index(const std::vector<StageParams>& chain_to_n);

} // namespace abc
