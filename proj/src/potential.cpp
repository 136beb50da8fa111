#include "tmcompose/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmcompose/errors.hpp"

namespace tmc {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": not finite");
}

void require_finite(Complex z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError(std::string(what) + ": not finite");
}

void require_interval(const Interval& iv) {
    require_finite(iv.lo, "interval endpoint");
    require_finite(iv.hi, "interval endpoint");
    if (!(iv.lo < iv.hi)) throw DomainError("interval: needs lo < hi");
}

double binomial(int n, int j) {
    double b = 1.0;
    for (int i = 0; i < j; ++i) b = b * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return b;
}

// Re-express polynomial coefficients around a shifted base point:
// sum c_j (x - a)^j = sum c'_j (x - a')^j with s = a' - a.
std::vector<Complex> rebase_polynomial(const std::vector<Complex>& c, double s) {
    const int n = static_cast<int>(c.size());
    std::vector<Complex> out(c.size(), Complex{0.0});
    for (int j = 0; j < n; ++j) {
        double sp = 1.0;  // s^(m - j) binomial accumulator
        for (int m = j; m < n; ++m) {
            out[j] += c[m] * binomial(m, j) * sp;
            sp *= s;
        }
    }
    return out;
}

}  // namespace

PotentialPiece PotentialPiece::constant(Interval iv, Complex value) {
    require_interval(iv);
    require_finite(value, "constant value");
    PotentialPiece p(Kind::Constant, iv);
    p.amp_ = value;
    return p;
}

PotentialPiece PotentialPiece::polynomial(Interval iv, std::vector<Complex> coefficients) {
    require_interval(iv);
    if (coefficients.empty()) coefficients.push_back(Complex{0.0});
    for (const auto& c : coefficients) require_finite(c, "polynomial coefficient");
    PotentialPiece p(Kind::Polynomial, iv);
    p.coeffs_ = std::move(coefficients);
    return p;
}

PotentialPiece PotentialPiece::complex_exponential(Interval iv, Complex amplitude,
                                                   double wavevector) {
    require_interval(iv);
    require_finite(amplitude, "exponential amplitude");
    require_finite(wavevector, "exponential wavevector");
    PotentialPiece p(Kind::ComplexExponential, iv);
    p.amp_ = amplitude;
    p.wavevector_ = wavevector;
    return p;
}

PotentialPiece PotentialPiece::gaussian_bump(Interval iv, Complex amplitude, double center,
                                             double width) {
    require_interval(iv);
    require_finite(amplitude, "gaussian amplitude");
    require_finite(center, "gaussian center");
    require_finite(width, "gaussian width");
    if (!(width > 0.0)) throw DomainError("gaussian width must be positive");
    PotentialPiece p(Kind::GaussianBump, iv);
    p.amp_ = amplitude;
    p.center_ = center;
    p.width_ = width;
    return p;
}

Complex PotentialPiece::value_at(double x) const { return derivative_at(x, 0); }

Complex PotentialPiece::derivative_at(double x, int order) const {
    if (order < 0 || order > 3)
        throw DomainError("PotentialPiece: derivatives available for orders 0..3");
    switch (kind_) {
        case Kind::Constant:
            return order == 0 ? amp_ : Complex{0.0};
        case Kind::Polynomial: {
            const double t = x - iv_.lo;
            Complex acc{0.0};
            const int n = static_cast<int>(coeffs_.size()) - 1;
            for (int j = n; j >= order; --j) {
                double fall = 1.0;  // j (j-1) ... (j-order+1)
                for (int r = 0; r < order; ++r) fall *= static_cast<double>(j - r);
                acc = acc * t + fall * coeffs_[j];
            }
            return acc;
        }
        case Kind::ComplexExponential: {
            Complex f = amp_ * std::exp(kI * (wavevector_ * x));
            for (int r = 0; r < order; ++r) f *= kI * wavevector_;
            return f;
        }
        case Kind::GaussianBump: {
            const double t = x - center_;
            const double s2 = width_ * width_;
            const double u = t / s2;
            const Complex g = amp_ * std::exp(-t * t / (2.0 * s2));
            switch (order) {
                case 0: return g;
                case 1: return -u * g;
                case 2: return (u * u - 1.0 / s2) * g;
                default: return (3.0 * u / s2 - u * u * u) * g;
            }
        }
    }
    return Complex{0.0};
}

PotentialPiece PotentialPiece::translated(double d) const {
    require_finite(d, "translation");
    PotentialPiece p = *this;
    p.iv_ = {iv_.lo + d, iv_.hi + d};
    switch (kind_) {
        case Kind::Constant:
            break;
        case Kind::Polynomial:
            // coefficients are in (x - lo), which moves with the interval
            break;
        case Kind::ComplexExponential:
            // z e^{iK(x-d)} = (z e^{-iKd}) e^{iKx}
            p.amp_ = amp_ * std::exp(-kI * (wavevector_ * d));
            break;
        case Kind::GaussianBump:
            p.center_ = center_ + d;
            break;
    }
    return p;
}

PotentialPiece PotentialPiece::scaled(Complex factor) const {
    require_finite(factor, "scale factor");
    PotentialPiece p = *this;
    p.amp_ *= factor;
    for (auto& c : p.coeffs_) c *= factor;
    return p;
}

std::optional<PotentialPiece> PotentialPiece::clipped(double lo, double hi) const {
    const double nlo = std::max(lo, iv_.lo);
    const double nhi = std::min(hi, iv_.hi);
    if (!(nlo < nhi)) return std::nullopt;
    PotentialPiece p = *this;
    p.iv_ = {nlo, nhi};
    if (kind_ == Kind::Polynomial && nlo != iv_.lo)
        p.coeffs_ = rebase_polynomial(coeffs_, nlo - iv_.lo);
    return p;
}

Potential::Potential(std::vector<PotentialPiece> pieces) : pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end(),
              [](const PotentialPiece& a, const PotentialPiece& b) {
                  return a.interval().lo < b.interval().lo;
              });
    for (size_t i = 1; i < pieces_.size(); ++i) {
        if (pieces_[i].interval().lo < pieces_[i - 1].interval().hi) {
            std::ostringstream os;
            os << "Potential: pieces overlap near x = " << pieces_[i].interval().lo;
            throw DomainError(os.str());
        }
    }
}

Complex Potential::evaluate(double x) const {
    require_finite(x, "evaluate position");
    for (const auto& p : pieces_)
        if (p.contains(x)) return p.value_at(x);
    return Complex{0.0};
}

Jet Potential::endpoint_jet(double x0, Side side, int order) const {
    require_finite(x0, "jet position");
    if (order < 0 || order > 3) throw DomainError("endpoint_jet: order must be 0..3");
    const PotentialPiece* hit = nullptr;
    for (const auto& p : pieces_) {
        const auto& iv = p.interval();
        if (side == Side::Right && x0 >= iv.lo && x0 < iv.hi) hit = &p;
        if (side == Side::Left && x0 > iv.lo && x0 <= iv.hi) hit = &p;
    }
    if (!hit) return Jet::zeros(order);
    std::vector<Complex> d(static_cast<size_t>(order) + 1);
    for (int j = 0; j <= order; ++j) d[j] = hit->derivative_at(x0, j);
    return Jet(std::move(d));
}

Potential Potential::truncated(double x1, double x2) const {
    if (!(x1 <= x2)) throw DomainError("truncated: needs x1 <= x2");
    std::vector<PotentialPiece> out;
    for (const auto& p : pieces_)
        if (auto c = p.clipped(x1, x2)) out.push_back(*c);
    return Potential(std::move(out));
}

Potential Potential::translated(double d) const {
    std::vector<PotentialPiece> out;
    out.reserve(pieces_.size());
    for (const auto& p : pieces_) out.push_back(p.translated(d));
    return Potential(std::move(out));
}

Potential Potential::scaled(Complex factor) const {
    std::vector<PotentialPiece> out;
    out.reserve(pieces_.size());
    for (const auto& p : pieces_) out.push_back(p.scaled(factor));
    return Potential(std::move(out));
}

std::optional<Interval> Potential::support() const {
    if (pieces_.empty()) return std::nullopt;
    return Interval{pieces_.front().interval().lo, pieces_.back().interval().hi};
}

std::vector<double> Potential::breakpoints() const {
    std::vector<double> bp;
    bp.reserve(2 * pieces_.size());
    for (const auto& p : pieces_) {
        bp.push_back(p.interval().lo);
        bp.push_back(p.interval().hi);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    return bp;
}

namespace {

double faddeev_integrand(const PotentialPiece& p, double x) {
    return (1.0 + std::abs(x)) * std::abs(p.value_at(x));
}

double adaptive_simpson(const PotentialPiece& p, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    if (depth > 40) throw QuadratureError("faddeev_norm: quadrature did not converge");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = faddeev_integrand(p, lm);
    const double frm = faddeev_integrand(p, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(p, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson(p, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double integrate_piece(const PotentialPiece& p, double a, double b, double tol) {
    if (!(a < b)) return 0.0;
    const double fa = faddeev_integrand(p, a);
    const double fb = faddeev_integrand(p, b);
    const double fm = faddeev_integrand(p, 0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(p, a, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace

double Potential::faddeev_norm(double tol) const {
    double total = 0.0;
    for (const auto& p : pieces_) {
        const double a = p.interval().lo;
        const double b = p.interval().hi;
        // |x| has a kink at 0; split there so Simpson sees smooth integrands
        if (a < 0.0 && b > 0.0) {
            total += integrate_piece(p, a, 0.0, 0.5 * tol);
            total += integrate_piece(p, 0.0, b, 0.5 * tol);
        } else {
            total += integrate_piece(p, a, b, tol);
        }
    }
    return total;
}

double Potential::sup_abs() const {
    double m = 0.0;
    for (const auto& p : pieces_) {
        switch (p.kind()) {
            case PotentialPiece::Kind::Constant:
            case PotentialPiece::Kind::ComplexExponential:
                m = std::max(m, std::abs(p.amplitude()));
                break;
            case PotentialPiece::Kind::GaussianBump: {
                double peak_x = p.center();
                if (peak_x < p.interval().lo) peak_x = p.interval().lo;
                if (peak_x > p.interval().hi) peak_x = p.interval().hi;
                m = std::max(m, std::abs(p.value_at(peak_x)));
                break;
            }
            case PotentialPiece::Kind::Polynomial: {
                const int samples = 64;
                const double a = p.interval().lo;
                const double h = p.interval().length() / samples;
                for (int i = 0; i <= samples; ++i)
                    m = std::max(m, std::abs(p.value_at(a + i * h)));
                break;
            }
        }
    }
    return m;
}

SupportRelation support_relation(const Potential& v1, const Potential& v2) {
    const auto s1 = v1.support();
    const auto s2 = v2.support();
    if (!s1 || !s2) throw DomainError("support_relation: empty support");
    SupportRelation r;
    if (s1->hi <= s2->lo) {
        r.kind = SupportRelation::Kind::StrictlyPrecedes;
        r.overlap_start = s2->lo;
        return r;
    }
    if (s1->lo <= s2->lo && s1->hi <= s2->hi) {
        r.kind = SupportRelation::Kind::WeaklyPrecedes;
        r.overlap_start = s2->lo;
        r.overlap_length = s1->hi - s2->lo;
        return r;
    }
    r.kind = SupportRelation::Kind::Other;
    return r;
}

}  // namespace tmc
