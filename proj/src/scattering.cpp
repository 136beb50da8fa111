#include "tmcompose/scattering.hpp"

#include <cmath>
#include <sstream>

#include "tmcompose/errors.hpp"

namespace tmc {

ScatteringAmplitudes amplitudes_from_transfer(const Mat2C& m, double k,
                                              double singularity_tol) {
    if (std::abs(m.a22) <= singularity_tol) {
        std::ostringstream os;
        os << "amplitudes_from_transfer: spectral singularity, |M22| = " << std::abs(m.a22);
        throw SpectralSingularityError(os.str(), m.a22);
    }
    ScatteringAmplitudes a;
    a.k = k;
    a.t = 1.0 / m.a22;
    a.r_right = m.a12 / m.a22;
    a.r_left = -m.a21 / m.a22;
    return a;
}

Mat2C transfer_from_amplitudes(const ScatteringAmplitudes& a) {
    if (a.t == Complex{0.0})
        throw DomainError("transfer_from_amplitudes: t must be nonzero");
    return {a.t - a.r_left * a.r_right / a.t, a.r_right / a.t, -a.r_left / a.t, 1.0 / a.t};
}

Mat2C translate_transfer(const Mat2C& m, double k, double d) {
    const Complex ph = std::exp(Complex{0.0, 2.0 * k * d});
    return {m.a11, m.a12 / ph, m.a21 * ph, m.a22};
}

}  // namespace tmc
