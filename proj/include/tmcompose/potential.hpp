#pragma once

#include <optional>
#include <vector>

#include "tmcompose/jet.hpp"
#include "tmcompose/mat2.hpp"

namespace tmc {

// Units: positions are arbitrary length units, potential values are energy
// units with hbar^2/2m = 1, so the Schroedinger equation reads
// -psi'' + v psi = k^2 psi. All dimensionless combinations (epsilon = k*ell)
// are formed explicitly by the callers.

enum class Side { Left, Right };

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

// One piece of a piecewise-analytic potential, live on the half-open
// interval [lo, hi). Values and derivatives up to order 3 are available in
// closed form, which is what the overlap-correction series feeds on.
class PotentialPiece {
public:
    enum class Kind { Constant, Polynomial, ComplexExponential, GaussianBump };

    static PotentialPiece constant(Interval iv, Complex value);
    // coefficients c_j of sum_j c_j (x - lo)^j
    static PotentialPiece polynomial(Interval iv, std::vector<Complex> coefficients);
    // amplitude * e^{i wavevector x}
    static PotentialPiece complex_exponential(Interval iv, Complex amplitude, double wavevector);
    // amplitude * exp(-(x-center)^2 / (2 width^2)), cut hard at the interval
    // edges (the cut is intentional; it provides discontinuous-endpoint
    // test material).
    static PotentialPiece gaussian_bump(Interval iv, Complex amplitude, double center,
                                        double width);

    Kind kind() const { return kind_; }
    const Interval& interval() const { return iv_; }
    bool contains(double x) const { return x >= iv_.lo && x < iv_.hi; }

    // Formula value/derivative at x, without support clipping.
    Complex value_at(double x) const;
    Complex derivative_at(double x, int order) const;

    PotentialPiece translated(double d) const;
    PotentialPiece scaled(Complex factor) const;
    std::optional<PotentialPiece> clipped(double lo, double hi) const;

    Complex amplitude() const { return amp_; }
    double wavevector() const { return wavevector_; }
    double center() const { return center_; }
    double width() const { return width_; }
    const std::vector<Complex>& coefficients() const { return coeffs_; }

private:
    PotentialPiece(Kind kind, Interval iv) : kind_(kind), iv_(iv) {}

    Kind kind_;
    Interval iv_;
    Complex amp_{};
    double wavevector_ = 0.0;
    double center_ = 0.0;
    double width_ = 0.0;
    std::vector<Complex> coeffs_;
};

// Compactly supported potential: an ordered list of disjoint pieces.
// Immutable after construction.
class Potential {
public:
    Potential() = default;  // identically zero
    explicit Potential(std::vector<PotentialPiece> pieces);

    bool is_zero() const { return pieces_.empty(); }
    const std::vector<PotentialPiece>& pieces() const { return pieces_; }

    // Piecewise evaluation; at a piece's left endpoint this is the right
    // limit, consistent with the half-open piece intervals.
    Complex evaluate(double x) const;

    // One-sided derivative values [v, v', ...] at x0, taken from the piece
    // covering the one-sided neighborhood; zero jet if none does.
    Jet endpoint_jet(double x0, Side side, int order) const;

    Potential truncated(double x1, double x2) const;
    Potential translated(double d) const;
    Potential scaled(Complex factor) const;

    // Closed hull of the piece intervals; nullopt for the zero potential.
    std::optional<Interval> support() const;

    // All piece endpoints, sorted and deduplicated. Integrators restart here
    // so that discontinuities never fall inside a step.
    std::vector<double> breakpoints() const;

    // integral (1 + |x|) |v(x)| dx by adaptive quadrature.
    double faddeev_norm(double tol = 1e-10) const;

    // Estimate of sup |v| over the support (exact for constant and
    // exponential pieces, sampled otherwise). Used for step-size heuristics.
    double sup_abs() const;

private:
    std::vector<PotentialPiece> pieces_;
};

struct SupportRelation {
    enum class Kind { StrictlyPrecedes, WeaklyPrecedes, Other };
    Kind kind = Kind::Other;
    double overlap_length = 0.0;  // ell, for WeaklyPrecedes
    double overlap_start = 0.0;   // inf of the second support, for WeaklyPrecedes
};

// Classifies the relative position of two supports. StrictlyPrecedes means
// the first support lies entirely to the left with at most a point contact;
// WeaklyPrecedes means the supports intersect in an interval of positive
// length ell and the first support sticks out only on the left. Throws
// DomainError when either potential is identically zero.
SupportRelation support_relation(const Potential& v1, const Potential& v2);

}  // namespace tmc
