#include "tmcompose/composition.hpp"

#include <algorithm>
#include <cmath>

#include "tmcompose/detail/parallel.hpp"
#include "tmcompose/errors.hpp"
#include "tmcompose/fitting.hpp"
#include "tmcompose/scattering.hpp"

namespace tmc {

Mat2C compose_disjoint(const Mat2C& m1, const Mat2C& m2) { return m2 * m1; }

Mat2C split_compose(const Potential& v, double k, double ell, const PropagatorConfig& cfg) {
    if (!(ell >= 0.0)) throw DomainError("split_compose: ell must be >= 0");
    const auto s = v.support();
    if (!s) return mat2_identity();

    Mat2C m_minus = mat2_identity();
    Mat2C m_window = mat2_identity();
    Mat2C m_plus = mat2_identity();
    if (s->lo < 0.0)
        m_minus = transfer_matrix(v.truncated(s->lo, 0.0), k, s->lo, 0.0, cfg).matrix;
    if (ell > 0.0) m_window = transfer_matrix(v.truncated(0.0, ell), k, 0.0, ell, cfg).matrix;
    if (s->hi > ell)
        m_plus = transfer_matrix(v.truncated(ell, s->hi), k, ell, s->hi, cfg).matrix;
    return m_plus * (m_window * m_minus);
}

Mat2C exact_overlap_correction_on(const Potential& v1, const Potential& v2, double k,
                                  double ell, const PropagatorConfig& cfg) {
    if (!(ell >= 0.0)) throw DomainError("exact_overlap_correction: ell must be >= 0");
    if (ell == 0.0) return mat2_identity();
    const Mat2C m2 = transfer_matrix(v2, k, 0.0, ell, cfg).matrix;
    const Mat2C m = transfer_matrix_sum({&v1, &v2}, k, 0.0, ell, cfg).matrix;
    const Mat2C m1 = transfer_matrix(v1, k, 0.0, ell, cfg).matrix;
    return inverse_unimodular(m2) * (m * inverse_unimodular(m1));
}

Mat2C exact_overlap_correction(const Potential& v1, const Potential& v2, double k,
                               const PropagatorConfig& cfg) {
    const auto rel = support_relation(v1, v2);
    if (rel.kind == SupportRelation::Kind::StrictlyPrecedes) return mat2_identity();
    if (rel.kind != SupportRelation::Kind::WeaklyPrecedes)
        throw DomainError("exact_overlap_correction: supports must precede weakly");
    const double scale = std::max({1.0, std::abs(v1.support()->lo), std::abs(v2.support()->hi)});
    if (std::abs(rel.overlap_start) > 1e-12 * scale)
        throw DomainError("exact_overlap_correction: overlap must be normalized to [0, ell]");
    return exact_overlap_correction_on(v1, v2, k, rel.overlap_length, cfg);
}

std::array<Mat2C, 7> overlap_series_coefficients(const Jet& v1_at_ell, const Jet& v2_at_zero,
                                                 double k, int order) {
    if (!(k > 0.0)) throw DomainError("overlap_series_coefficients: k must be positive");
    if (order < 2 || order > 6)
        throw DomainError("overlap_series_coefficients: order must be in 2..6");
    if (v1_at_ell.order() < order - 3 || v2_at_zero.order() < order - 3)
        throw JetOrderError("overlap_series_coefficients: order ell^n needs jets to n - 3");

    std::array<Mat2C, 7> b;
    b.fill(mat2_zero());
    b[0] = mat2_identity();
    const Mat2C k0 = k_matrix(0.0);
    const Mat2C s1 = pauli(1);
    const Mat2C s2 = pauli(2);

    const Complex a = v1_at_ell[0];
    const Complex c = v2_at_zero[0];
    if (order >= 3) b[3] = (-kI / (6.0 * k) * (a * c)) * k0;
    if (order >= 4) {
        const Complex ap = v1_at_ell[1];
        const Complex cp = v2_at_zero[1];
        b[4] = (-1.0 / (24.0 * k)) *
               ((4.0 * k * a * c) * s1 + (kI * (a * cp - ap * c)) * k0);
        if (order >= 5) {
            const Complex app = v1_at_ell[2];
            const Complex cpp = v2_at_zero[2];
            b[5] = (-1.0 / (120.0 * k)) *
                   ((k * (6.0 * a * cp - 4.0 * ap * c)) * s1 +
                    (8.0 * k * k * a * c) * s2 +
                    (kI * (-4.0 * k * k * a * c - ap * cp + a * cpp + app * c +
                           4.0 * (a * c * c + a * a * c))) *
                        k0);
            if (order >= 6) {
                const Complex appp = v1_at_ell[3];
                const Complex cppp = v2_at_zero[3];
                b[6] = (-1.0 / (720.0 * k)) *
                       ((-32.0 * k * k * k * a * c - 6.0 * k * ap * cp +
                         4.0 * k * (2.0 * a * cpp + app * c) +
                         16.0 * k * a * c * (2.0 * a + c)) *
                            s1 +
                        (4.0 * k * k * (5.0 * a * cp - 2.0 * ap * c)) * s2 +
                        (kI * (4.0 * k * k * (ap * c - a * cp) + app * cp - ap * cpp +
                               a * cppp - appp * c + 4.0 * (a * a * cp - ap * c * c) -
                               14.0 * a * c * (ap - cp))) *
                            k0);
            }
        }
    }
    return b;
}

Mat2C series_overlap_correction(const EndpointData& d, int order) {
    if (!(d.ell >= 0.0)) throw DomainError("series_overlap_correction: ell must be >= 0");
    const auto b = overlap_series_coefficients(d.v1_at_ell, d.v2_at_zero, d.k, order);
    Mat2C s = b[0];
    double lp = d.ell * d.ell * d.ell;
    for (int n = 3; n <= order; ++n) {
        s = s + lp * b[static_cast<size_t>(n)];
        lp *= d.ell;
    }
    return s;
}

namespace {

Mat2C transfer_over_hull(const Potential& v, double k, const PropagatorConfig& cfg) {
    return transfer_matrix(v, k, cfg).matrix;
}

}  // namespace

Mat2C generalized_compose(const Potential& v1, const Potential& v2, double k,
                          ComposeMethod method, const PropagatorConfig& cfg) {
    const auto rel = support_relation(v1, v2);
    if (rel.kind == SupportRelation::Kind::Other)
        throw DomainError("generalized_compose: supports must precede (strictly or weakly)");

    if (rel.kind == SupportRelation::Kind::StrictlyPrecedes)
        return transfer_over_hull(v2, k, cfg) * transfer_over_hull(v1, k, cfg);

    // Normalize the overlap to [0, ell], compose there, translate back.
    const double d0 = -rel.overlap_start;
    const Potential w1 = v1.translated(d0);
    const Potential w2 = v2.translated(d0);
    const double ell = rel.overlap_length;

    Mat2C s;
    if (method.kind == ComposeMethod::Kind::Exact) {
        s = exact_overlap_correction_on(w1, w2, k, ell, cfg);
    } else {
        EndpointData d{w1.endpoint_jet(ell, Side::Left, 3), w2.endpoint_jet(0.0, Side::Right, 3),
                       k, ell};
        s = series_overlap_correction(d, method.series_order);
    }
    const Mat2C m = transfer_over_hull(w2, k, cfg) * (s * transfer_over_hull(w1, k, cfg));
    return translate_transfer(m, k, -d0);
}

OverlapReport convergence_sweep(const Potential& v1, const Potential& v2, double k,
                                const std::vector<double>& ells, int order,
                                const PropagatorConfig& cfg, int jobs) {
    if (!(k > 0.0)) throw DomainError("convergence_sweep: k must be positive");
    if (order < 2 || order > 6) throw DomainError("convergence_sweep: order must be in 2..6");
    if (ells.size() < 4) throw DomainError("convergence_sweep: needs at least 4 ell values");
    const auto s1 = v1.support();
    const auto s2 = v2.support();
    if (!s1 || !s2) throw DomainError("convergence_sweep: empty support");
    const auto [lo_it, hi_it] = std::minmax_element(ells.begin(), ells.end());
    if (!(*lo_it > 0.0)) throw DomainError("convergence_sweep: ell values must be positive");
    if (*hi_it / *lo_it < 10.0 * (1.0 - 1e-9))
        throw DomainError("convergence_sweep: ell values must span at least a decade");
    for (double ell : ells) {
        if (!(k * ell < 1.0))
            throw DomainError("convergence_sweep: requires k*ell < 1 for every ell");
        if (ell > s1->length() || ell > s2->length())
            throw DomainError("convergence_sweep: ell exceeds a support length");
    }

    // Fixed shapes, sliding overlap: v2 anchored at 0, v1 slid so that its
    // right end sits at ell. The endpoint jets are translation invariant.
    const Potential v2n = v2.translated(-s2->lo);
    const Jet jet1 = v1.endpoint_jet(s1->hi, Side::Left, 3);
    const Jet jet2 = v2.endpoint_jet(s2->lo, Side::Right, 3);

    OverlapReport report;
    report.requested_order = order;
    const double scale = std::max({1e-300, v1.sup_abs(), v2.sup_abs()});
    const bool zero1 = std::abs(jet1[0]) < 1e-12 * scale;
    const bool zero2 = std::abs(jet2[0]) < 1e-12 * scale;
    report.regime = zero1 ? (zero2 ? OverlapRegime::ContinuousBoth : OverlapRegime::V1Continuous)
                          : (zero2 ? OverlapRegime::V2Continuous
                                   : OverlapRegime::DiscontinuousBoth);

    std::vector<double> sorted_ells = ells;
    std::sort(sorted_ells.begin(), sorted_ells.end());
    report.points.resize(sorted_ells.size());
    detail::parallel_for(static_cast<int>(sorted_ells.size()), jobs, [&](int idx) {
        const double ell = sorted_ells[static_cast<size_t>(idx)];
        OverlapPoint pt;
        pt.ell = ell;
        const Potential v1l = v1.translated(ell - s1->hi);
        pt.s_exact = exact_overlap_correction_on(v1l, v2n, k, ell, cfg);
        pt.deviation_from_identity = max_abs_diff(pt.s_exact, mat2_identity());
        for (int n = 3; n <= 6; ++n) {
            if (jet1.order() < n - 3 || jet2.order() < n - 3) continue;
            const Mat2C s = series_overlap_correction({jet1, jet2, k, ell}, n);
            pt.s_series[n] = s;
            pt.errors[n] = max_abs_diff(pt.s_exact, s);
        }
        report.points[static_cast<size_t>(idx)] = std::move(pt);
    });
    for (const auto& pt : report.points)
        if (k * pt.ell > 1.0) report.epsilon_warnings.push_back(pt.ell);

    std::vector<double> xs, ys;
    for (const auto& pt : report.points) {
        xs.push_back(pt.ell);
        ys.push_back(pt.deviation_from_identity);
    }
    report.identity_slope = fit_loglog_slope(xs, ys).slope;
    for (int n = 3; n <= 6; ++n) {
        ys.clear();
        bool have = true;
        for (const auto& pt : report.points) {
            auto it = pt.errors.find(n);
            if (it == pt.errors.end()) {
                have = false;
                break;
            }
            ys.push_back(it->second);
        }
        if (have) report.slopes_by_order[n] = fit_loglog_slope(xs, ys).slope;
    }
    report.fitted_slope =
        order == 2 ? report.identity_slope : report.slopes_by_order.at(order);
    return report;
}

}  // namespace tmc
