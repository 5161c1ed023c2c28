#include "abc/system.hpp"

#include "abc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace abc {

AbCSystem make_system(MapPtr H, const StageParams& stage) {
    return {std::move(H), BigRational(stage.p_next(), stage.q_next()), stage};
}

AbCSystem rotation_system(const BigRational& alpha) {
    StageParams st;
    st.p = alpha.num();
    st.q = alpha.den();
    st.alpha = alpha;
    return {make_identity(), alpha, st};
}

RotationClock::RotationClock(const BigRational& alpha) {
    BigRational a = alpha.frac();
    P_ = a.num();
    Q_ = a.den();
    small_ = Q_.fits_ulong_p() && Q_ < BigInt("4611686018427387904");
    if (small_) {
        p_ = P_.get_ui();
        q_ = Q_.get_ui();
    }
}

double RotationClock::offset(uint64_t t) const {
    if (small_) {
        unsigned __int128 r = (unsigned __int128)(t % q_) * p_ % q_;
        return double(uint64_t(r)) / double(q_);
    }
    BigInt r = BigInt(std::to_string(t)) * P_;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), Q_.get_mpz_t());
    return mpq_class(r, Q_).get_d();
}

uint64_t sample_count(uint64_t L, uint64_t stride) {
    if (stride == 0) throw std::invalid_argument("stride must be >= 1");
    return (L + stride - 1) / stride;
}

std::vector<Pt> orbit_from_preimage(const AbCSystem& sys, Pt u, uint64_t L, uint64_t stride) {
    if (L < 1) throw std::invalid_argument("orbit length must be >= 1");
    RotationClock clock(sys.alpha_next);
    std::vector<Pt> out;
    out.reserve(sample_count(L, stride));
    for (uint64_t t = 0; t < L; t += stride) out.push_back(sys.H->forward({wrap01(u.x + clock.offset(t)), u.y}));
    return out;
}

std::vector<Pt> orbit(const AbCSystem& sys, Pt x, uint64_t L, uint64_t stride) {
    return orbit_from_preimage(sys, sys.H->inverse(x), L, stride);
}

Pt apply_T(const AbCSystem& sys, Pt x) {
    Pt u = sys.H->inverse(x);
    u.x = wrap01(u.x + sys.alpha_next.frac().to_double());
    return sys.H->forward(u);
}

std::vector<Pt> orbit_naive(const AbCSystem& sys, Pt x, uint64_t L) {
    std::vector<Pt> out{x};
    for (uint64_t t = 1; t < L; ++t) out.push_back(apply_T(sys, out.back()));
    return out;
}

JacobianStats jacobian_mc(const MapNode& node, long samples, double h, uint64_t seed) {
    if (!(h >= 1e-8 && h <= 1e-4)) throw std::invalid_argument("fd_step must lie in [1e-8, 1e-4]");
    Rng rng(seed, 0x6a61636f);
    JacobianStats st;
    double sum = 0;
    for (long i = 0; i < samples; ++i) {
        Pt p{rng.uniform(), rng.uniform()};
        if (node.kink_distance(p) < 2 * h) {
            ++st.excluded;
            continue;
        }
        const double x0 = wrap01(p.x - h), x1 = wrap01(p.x + h);
        const double y0 = wrap01(p.y - h), y1 = wrap01(p.y + h);
        // divide by the step actually taken after rounding
        const double hx = circ_diff(x1, x0), hy = circ_diff(y1, y0);
        Pt xp = node.forward({x1, p.y}), xm = node.forward({x0, p.y});
        Pt yp = node.forward({p.x, y1}), ym = node.forward({p.x, y0});
        double a = circ_diff(xp.x, xm.x) / hx, c = circ_diff(xp.y, xm.y) / hx;
        double b = circ_diff(yp.x, ym.x) / hy, d = circ_diff(yp.y, ym.y) / hy;
        double dev = std::fabs(a * d - b * c - 1);
        sum += dev;
        st.max_abs = std::max(st.max_abs, dev);
        ++st.used;
    }
    st.mean_abs = st.used ? sum / double(st.used) : 0;
    return st;
}

long central_index(const std::vector<StageParams>& chain) {
    if (chain.empty()) throw std::invalid_argument("central_index needs at least one stage");
    BigRational c = 0;
    for (size_t m = 0; m + 1 < chain.size(); ++m) c = c + BigRational(1, 2 * chain[m].q);
    const BigInt& q = chain.back().q;
    // round(c q) with ties to the lower index
    BigRational cq = c * BigRational(q);
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), cq.num().get_mpz_t(), cq.den().get_mpz_t());
    BigRational rem = cq - BigRational(fl);
    BigInt i = (rem > BigRational(1, 2)) ? BigInt(fl + 1) : fl;
    if (i >= q) i = q - 1;
    return to_long_checked(i, "central index");
}

} // namespace abc
