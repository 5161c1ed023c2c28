#include "abc/normest.hpp"

#include "abc/csv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace abc {

namespace {

using Fn = std::function<Pt(Pt)>;

// Partials of the lifted map at p: first[i][j] = D_j f_i, second[i] = {xx, xy, yy}.
struct Partials {
    double first[2][2] = {};
    double second[2][3] = {};
};

double coord(Pt p, int i) { return i == 0 ? p.x : p.y; }

Pt shifted(Pt p, double dx, double dy) { return {wrap01(p.x + dx), wrap01(p.y + dy)}; }

Partials partials(const Fn& f, Pt p, double h, int order) {
    Partials d;
    const Pt xp = f(shifted(p, h, 0)), xm = f(shifted(p, -h, 0));
    const Pt yp = f(shifted(p, 0, h)), ym = f(shifted(p, 0, -h));
    for (int i = 0; i < 2; ++i) {
        d.first[i][0] = circ_diff(coord(xp, i), coord(xm, i)) / (2 * h);
        d.first[i][1] = circ_diff(coord(yp, i), coord(ym, i)) / (2 * h);
    }
    if (order >= 2) {
        const Pt c = f(p);
        const Pt pp = f(shifted(p, h, h)), pm = f(shifted(p, h, -h));
        const Pt mp = f(shifted(p, -h, h)), mm = f(shifted(p, -h, -h));
        for (int i = 0; i < 2; ++i) {
            const double ci = coord(c, i);
            d.second[i][0] = (circ_diff(coord(xp, i), ci) + circ_diff(coord(xm, i), ci)) / (h * h);
            d.second[i][2] = (circ_diff(coord(yp, i), ci) + circ_diff(coord(ym, i), ci)) / (h * h);
            d.second[i][1] = (circ_diff(coord(pp, i), coord(pm, i)) - circ_diff(coord(mp, i), coord(mm, i))) / (4 * h * h);
        }
    }
    return d;
}

// Richardson combination of steps h and h/2; returns the refined partials and the step discrepancy.
Partials refined(const Fn& f, Pt p, double h, int order, double& disc) {
    Partials a = partials(f, p, h, order), b = partials(f, p, h / 2, order);
    Partials r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            r.first[i][j] = (4 * b.first[i][j] - a.first[i][j]) / 3;
            disc = std::max(disc, std::fabs(a.first[i][j] - b.first[i][j]));
        }
        for (int j = 0; j < 3; ++j) r.second[i][j] = (4 * b.second[i][j] - a.second[i][j]) / 3;
    }
    return r;
}

double max_first(const Partials& d) {
    double m = 0;
    for (auto& row : d.first)
        for (double v : row) m = std::max(m, std::fabs(v));
    return m;
}

double max_second(const Partials& d) {
    double m = 0;
    for (auto& row : d.second)
        for (double v : row) m = std::max(m, std::fabs(v));
    return m;
}

Pt grid_point(int g, long idx) { return {(double(idx % g) + 0.5) / g, (double(idx / g) + 0.5) / g}; }

struct Sweep {
    double value = 0;
    double disc = 0;
    long excluded = 0;
};

// One sweep over the grid for a single direction (forward or inverse).
Sweep sweep(const Fn& f, const std::function<double(Pt)>& kink, int k, int g, double h1, double h2, double radius1,
            double radius2) {
    Sweep s;
    const long n = long(g) * g;
    double value = 0, disc = 0;
    long excluded = 0;
#pragma omp parallel for schedule(static) reduction(max : value, disc) reduction(+ : excluded)
    for (long idx = 0; idx < n; ++idx) {
        const Pt p = grid_point(g, idx);
        const Pt v = f(p);
        double m = std::max(v.x, v.y);
        if (k >= 1) {
            const double kd = kink(p);
            if (kd < radius1) {
                ++excluded;
            } else {
                double local = 0;
                m = std::max(m, max_first(refined(f, p, h1, 1, local)));
                disc = std::max(disc, local);
                if (k >= 2 && kd >= radius2) {
                    double unused = 0;
                    m = std::max(m, max_second(refined(f, p, h2, 2, unused)));
                }
            }
        }
        value = std::max(value, m);
    }
    s.value = value;
    s.disc = disc;
    s.excluded = excluded;
    return s;
}

void check_args(int k, int grid, double fd_step) {
    if (k < 0 || k > 2) throw std::invalid_argument("norm order k must be 0, 1 or 2");
    if (grid < 1) throw std::invalid_argument("grid must be >= 1");
    if (!(fd_step > 0 && fd_step < 0.01)) throw std::invalid_argument("fd_step must lie in (0, 0.01)");
}

} // namespace

NormEstimate triple_norm(const MapNode& node, int k, int grid, double fd_step) {
    check_args(k, grid, fd_step);
    NormEstimate est;
    est.k = k;
    est.grid = grid;
    est.fd_step = fd_step;
    const double h2 = std::max(fd_step, 1e-4);
    if (fd_step > node.min_width() / 10)
        est.warnings.push_back("fd_step " + fmt_double(fd_step) + " does not resolve block width " + fmt_double(node.min_width()));

    Fn fwd = [&](Pt p) { return node.forward(p); };
    Fn inv = [&](Pt p) { return node.inverse(p); };
    auto kink_fwd = [&](Pt p) { return node.kink_distance(p); };
    Sweep a = sweep(fwd, kink_fwd, k, grid, fd_step, h2, 2 * fd_step, 3 * h2);
    // Kinks of the inverse are images of kinks of the forward map; scale by a Lipschitz bound.
    const double lip = std::max(1.0, a.value);
    auto kink_inv = [&](Pt p) { return node.kink_distance(node.inverse(p)) / lip; };
    Sweep b = sweep(inv, kink_inv, k, grid, fd_step, h2, 2 * fd_step, 3 * h2);

    est.value = std::max(a.value, b.value);
    est.discrepancy = std::max(a.disc, b.disc);
    est.excluded_fraction = double(a.excluded + b.excluded) / (2.0 * double(grid) * grid);
    if (est.excluded_fraction > 0.5) est.warnings.push_back("more than half of the grid excluded near kinks");
    return est;
}

double dk_distance(const MapNode& f, const MapNode& g, int k, int grid, double fd_step, double exclusion) {
    check_args(k, grid, fd_step);
    if (exclusion <= 0) exclusion = 2 * fd_step;
    const double h2 = std::max(fd_step, 1e-4);
    const long n = long(grid) * grid;
    double result = 0;
    for (int dir = 0; dir < 2; ++dir) {
        Fn F = dir == 0 ? Fn([&](Pt p) { return f.forward(p); }) : Fn([&](Pt p) { return f.inverse(p); });
        Fn G = dir == 0 ? Fn([&](Pt p) { return g.forward(p); }) : Fn([&](Pt p) { return g.inverse(p); });
        auto kink = [&](Pt p) {
            if (dir == 0) return std::min(f.kink_distance(p), g.kink_distance(p));
            return std::min(f.kink_distance(f.inverse(p)), g.kink_distance(g.inverse(p)));
        };
        double m = 0;
#pragma omp parallel for schedule(static) reduction(max : m)
        for (long idx = 0; idx < n; ++idx) {
            const Pt p = grid_point(grid, idx);
            double local = torus_dist(F(p), G(p));
            if (k >= 1) {
                const double kd = kink(p);
                if (kd >= exclusion) {
                    double unused = 0;
                    Partials a = refined(F, p, fd_step, 1, unused), b = refined(G, p, fd_step, 1, unused);
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j) local = std::max(local, std::fabs(a.first[i][j] - b.first[i][j]));
                    if (k >= 2 && kd >= std::max(exclusion, 3 * h2)) {
                        Partials a2 = refined(F, p, h2, 2, unused), b2 = refined(G, p, h2, 2, unused);
                        for (int i = 0; i < 2; ++i)
                            for (int j = 0; j < 3; ++j)
                                local = std::max(local, std::fabs(a2.second[i][j] - b2.second[i][j]));
                    }
                }
            }
            m = std::max(m, local);
        }
        result = std::max(result, m);
    }
    return result;
}

SubmultReport check_submultiplicative(const MapPtr& f, const MapPtr& g, int k, int grid, double fd_step) {
    if (k != 1) throw std::invalid_argument("submultiplicativity is checked at k = 1 only");
    SubmultReport r;
    r.composite = triple_norm(*make_composite({f, g}), 1, grid, fd_step).value;
    r.left = triple_norm(*f, 1, grid, fd_step).value;
    r.right = triple_norm(*g, 1, grid, fd_step).value;
    return r;
}

double cover_bound(double norm, double eps, double C) { return 4 * std::pow(C, 4) * std::pow(norm, 4) / (eps * eps); }

void write_norm_csv(std::ostream& os, const std::vector<NormRecord>& rows) {
    os << "node,k,estimate,grid,fd_step,excluded_fraction\n";
    for (const auto& r : rows) {
        std::string name = r.node;
        std::replace(name.begin(), name.end(), ',', ';');
        os << name << "," << r.est.k << "," << fmt_double(r.est.value) << "," << r.est.grid << ","
           << fmt_double(r.est.fd_step) << "," << fmt_double(r.est.excluded_fraction) << "\n";
    }
}

} // namespace abc
