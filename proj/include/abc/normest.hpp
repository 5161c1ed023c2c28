#pragma once

#include "abc/mapnode.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace abc {

struct NormEstimate {
    int k = 1;
    double value = 0;
    int grid = 0;
    double fd_step = 1e-6;
    double excluded_fraction = 0;
    double discrepancy = 0;              // max |D(h) - D(h/2)| over used points
    std::vector<std::string> warnings;
};

// max over a boundary-offset grid of |partials| of order <= k of node and node^{-1}.
// k in {0, 1, 2}; second differences use a step of at least 1e-4.
NormEstimate triple_norm(const MapNode& node, int k, int grid, double fd_step = 1e-6);

// Sampled C^k distance of f and g, including inverses. Points whose kink distance is
// below `exclusion` (default 2 fd_step) only contribute to the C^0 part.
double dk_distance(const MapNode& f, const MapNode& g, int k, int grid, double fd_step = 1e-6, double exclusion = 0);

struct SubmultReport {
    double composite = 0;
    double left = 0;
    double right = 0;
    double constant = 4;
    bool ok() const { return composite <= constant * left * right; }
};

// triple_norm(f o g, 1) against C triple_norm(f, 1) triple_norm(g, 1).
SubmultReport check_submultiplicative(const MapPtr& f, const MapPtr& g, int k = 1, int grid = 64, double fd_step = 1e-6);

// Cover-count ceiling 4 C^4 norm^4 / eps^2.
double cover_bound(double norm, double eps, double C = 4);

struct NormRecord {
    std::string node;
    NormEstimate est;
};

// Columns: node,k,estimate,grid,fd_step,excluded_fraction
void write_norm_csv(std::ostream& os, const std::vector<NormRecord>& rows);

} // namespace abc
