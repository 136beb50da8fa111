#pragma once

#include <array>
#include <map>
#include <vector>

#include "tmcompose/jet.hpp"
#include "tmcompose/mat2.hpp"
#include "tmcompose/potential.hpp"
#include "tmcompose/propagator.hpp"

namespace tmc {

// Composition of transfer matrices for a pair of potentials v1, v2 whose
// supports either are disjoint (M = M2 M1) or overlap in an interval
// [0, ell], where the product picks up a correction factor:
//     M = M2 S(eps) M1,   eps = k ell,
//     S(eps) = M2(eps,0)^{-1} M(eps,0) M1(eps,0)^{-1},
// with M(eps,0) the transfer matrix of v1 + v2 restricted to the overlap.
// S can be computed exactly by integration, or from a closed-form power
// series in ell driven by the one-sided endpoint jets of v1 at ell and of
// v2 at 0. The leading correction order is ell^3 when both endpoint values
// are nonzero, ell^4 when exactly one vanishes, and ell^5 when both do.

// Endpoint data feeding the series: one-sided jets (orders 0..3) of v1 at
// the right end of the overlap and of v2 at its left end. A series of order
// ell^n needs jet entries up to order n - 3.
struct EndpointData {
    Jet v1_at_ell;
    Jet v2_at_zero;
    double k = 1.0;
    double ell = 0.0;
};

enum class OverlapRegime { DiscontinuousBoth, V1Continuous, V2Continuous, ContinuousBoth };

// Standard composition for disjoint supports (first potential leftmost).
Mat2C compose_disjoint(const Mat2C& m1, const Mat2C& m2);

// Three-factor split of a single potential around [0, ell]:
// M = M_+ M_0 M_- with the three factors integrated over the left part,
// the window, and the right part. Requires the support to contain [0, ell].
Mat2C split_compose(const Potential& v, double k, double ell,
                    const PropagatorConfig& cfg = {});

// Exact overlap correction by integration over [0, ell]. The first overload
// derives ell from the support relation and requires the overlap already
// normalized to start at 0; the second takes ell explicitly.
Mat2C exact_overlap_correction(const Potential& v1, const Potential& v2, double k,
                               const PropagatorConfig& cfg = {});
Mat2C exact_overlap_correction_on(const Potential& v1, const Potential& v2, double k,
                                  double ell, const PropagatorConfig& cfg = {});

// Closed-form coefficients B_0..B_6 of S = sum_n B_n ell^n in the endpoint
// jets, hard-coded through sixth order. Entries above `order` are zero.
// The jetseries module regenerates the same coefficients independently.
std::array<Mat2C, 7> overlap_series_coefficients(const Jet& v1_at_ell, const Jet& v2_at_zero,
                                                 double k, int order = 6);

// Series evaluation of S through ell^order, order in 2..6 (order 2 returns
// the identity: corrections start at ell^3).
Mat2C series_overlap_correction(const EndpointData& d, int order);

struct ComposeMethod {
    enum class Kind { Exact, Series };
    Kind kind = Kind::Exact;
    int series_order = 6;
    static ComposeMethod exact() { return {Kind::Exact, 0}; }
    static ComposeMethod series(int order) { return {Kind::Series, order}; }
};

// M2 * S * M1 with S from the selected method; S = 1 for strictly disjoint
// supports. Throws DomainError for support relations other than
// (strictly/weakly) preceding.
Mat2C generalized_compose(const Potential& v1, const Potential& v2, double k,
                          ComposeMethod method, const PropagatorConfig& cfg = {});

struct OverlapPoint {
    double ell = 0.0;
    Mat2C s_exact;
    std::map<int, Mat2C> s_series;   // orders 3..6 where jets allow
    std::map<int, double> errors;    // ||s_exact - s_series[n]||
    double deviation_from_identity = 0.0;
};

struct OverlapReport {
    std::vector<OverlapPoint> points;
    OverlapRegime regime = OverlapRegime::DiscontinuousBoth;
    int requested_order = 2;
    // Least-squares slope of log(error) vs log(ell) for the requested order
    // (order 2 fits the deviation from the identity).
    double fitted_slope = 0.0;
    std::map<int, double> slopes_by_order;
    double identity_slope = 0.0;
    std::vector<double> epsilon_warnings;  // ells with k*ell > 1
};

// Slides v1 so that the pair overlaps in [0, ell] for each requested ell
// (v2 is translated once so its support starts at 0; the shapes are kept
// fixed, so the endpoint jets do not change along the sweep), then compares
// exact and series corrections and fits the convergence slope. Requires at
// least 4 ell values spanning a decade, each with k*ell < 1.
OverlapReport convergence_sweep(const Potential& v1, const Potential& v2, double k,
                                const std::vector<double>& ells, int order,
                                const PropagatorConfig& cfg = {1e-12, 1e-14}, int jobs = 1);

}  // namespace tmc
