#include "tmcompose/jetseries.hpp"

#include <cmath>

#include "tmcompose/detail/series_engine.hpp"
#include "tmcompose/errors.hpp"

namespace tmc {

namespace {

void require_order(const Jet& f, int n_max, const char* who) {
    if (f.order() < n_max - 1)
        throw JetOrderError(std::string(who) + ": jet order " + std::to_string(f.order()) +
                            " too shallow for n_max " + std::to_string(n_max));
}

constexpr Complex kZero{0.0};
constexpr Complex kOne{1.0};

}  // namespace

DCoefficients d_recursion(const Jet& f, int n_max) {
    if (n_max < 0) throw DomainError("d_recursion: n_max must be >= 0");
    require_order(f, n_max, "d_recursion");
    DCoefficients d;
    detail::d_recursion_core(f.derivatives(), n_max, kZero, kOne, d.plus, d.minus);
    return d;
}

std::vector<Mat2C> c_matrices(const Jet& f, int n_max) {
    if (n_max < 0) throw DomainError("c_matrices: n_max must be >= 0");
    require_order(f, n_max, "c_matrices");
    return detail::c_matrices_core(f.derivatives(), n_max, kZero, kOne);
}

std::vector<Mat2C> u_series(const Jet& f, int n_max) { return c_matrices(f, n_max); }

std::vector<Mat2C> u_inverse_series(const std::vector<Mat2C>& u) {
    return detail::series_adjugate(u);
}

std::vector<Mat2C> multiply_series(const std::vector<Mat2C>& a,
                                   const std::vector<Mat2C>& b) {
    return detail::multiply_series_core(a, b);
}

std::vector<Mat2C> exp_i_sigma3_series(int n_max) {
    return detail::exp_i_sigma3_series_core(n_max, kZero, kOne);
}

std::vector<Mat2C> s_series_from_jets(const Jet& f1, const Jet& f2, int n_max) {
    if (n_max < 0) throw DomainError("s_series_from_jets: n_max must be >= 0");
    require_order(f1, n_max, "s_series_from_jets(f1)");
    require_order(f2, n_max, "s_series_from_jets(f2)");
    const int depth = std::min(f1.order(), f2.order());
    return detail::s_series_core(f1.truncated(depth).derivatives(),
                                 f2.truncated(depth).derivatives(), n_max, kZero, kOne);
}

std::vector<Mat2C> s_series_endpoint_form(const Jet& v1_jet_at_ell, const Jet& v2_jet_at_0,
                                          double k, int n_max) {
    if (!(k > 0.0)) throw DomainError("s_series_endpoint_form: k must be positive");
    if (n_max < 0) throw DomainError("s_series_endpoint_form: n_max must be >= 0");
    if (v1_jet_at_ell.order() < n_max - 3 || v2_jet_at_0.order() < n_max - 3)
        throw JetOrderError("s_series_endpoint_form: v-jets need order >= n_max - 3");

    using detail::TruncPoly;
    const int cap = n_max;
    const TruncPoly zero(cap);
    const TruncPoly one = TruncPoly::constant(1.0, cap);

    // v-jet (in x) -> jet of f = 2w - 1 (in tau = kx):
    // f(tau0) = v(x0)/k^2 - 1, f^(j)(tau0) = v^(j)(x0) / k^(2+j).
    auto f_jet_entries = [&](const Jet& vjet) {
        std::vector<Complex> f(static_cast<size_t>(vjet.order()) + 1);
        double kp = k * k;
        for (int j = 0; j <= vjet.order(); ++j) {
            f[j] = vjet[j] / kp;
            kp *= k;
        }
        f[0] -= 1.0;
        return f;
    };

    const auto f1_at_eps = f_jet_entries(v1_jet_at_ell);
    const auto f2_at_zero = f_jet_entries(v2_jet_at_0);

    // Lift to polynomial-valued entries, pad to order n_max - 1 (the padded
    // top entries cancel out of the collected coefficients), and move the
    // left factor's jet from the right end of the overlap to tau = 0 by a
    // Taylor shift of -eps, carried symbolically in the expansion parameter.
    const size_t width = static_cast<size_t>(std::max(n_max, 1));
    auto lift = [&](const std::vector<Complex>& entries) {
        std::vector<TruncPoly> out(width, zero);
        for (size_t j = 0; j < entries.size() && j < width; ++j)
            out[j] = TruncPoly::constant(entries[j], cap);
        return out;
    };

    std::vector<TruncPoly> f1 = lift(f1_at_eps);
    const TruncPoly minus_eps = TruncPoly::monomial(-1.0, 1, cap);
    f1 = detail::taylor_shift(f1, minus_eps, one);
    const std::vector<TruncPoly> f2 = lift(f2_at_zero);

    const auto s = detail::s_series_core(f1, f2, n_max, zero, one);

    // Collect total powers of the expansion parameter:
    // S = sum_n (S_n / n!) eps^n with polynomial-valued S_n, so the
    // coefficient of eps^N is sum_j coeff_{N-j}(S_j) / j!. Then eps = k ell
    // converts to ell powers.
    std::vector<Mat2C> b(static_cast<size_t>(n_max) + 1, mat2_zero());
    for (int total = 0; total <= n_max; ++total) {
        Mat2C acc = mat2_zero();
        double fact = 1.0;
        for (int j = 0; j <= total; ++j) {
            const auto& m = s[static_cast<size_t>(j)];
            const int r = total - j;
            acc = acc + (1.0 / fact) * Mat2C{m.a11.coeff(r), m.a12.coeff(r),
                                             m.a21.coeff(r), m.a22.coeff(r)};
            fact *= static_cast<double>(j + 1);
        }
        b[static_cast<size_t>(total)] = std::pow(k, total) * acc;
    }
    return b;
}

}  // namespace tmc
