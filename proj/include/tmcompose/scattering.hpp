#pragma once

#include "tmcompose/mat2.hpp"

namespace tmc {

// Left/right reflection and transmission amplitudes at a fixed wavenumber.
// Dictionary to the transfer matrix:
//   M11 = T - R^l R^r / T,  M12 = R^r / T,  M21 = -R^l / T,  M22 = 1 / T.
// No unitarity is implied; the potentials may be complex.
struct ScatteringAmplitudes {
    Complex r_left{};
    Complex r_right{};
    Complex t{1.0};
    double k = 0.0;
};

// Throws SpectralSingularityError (carrying M22) when |M22| is at or below
// the singularity tolerance, where T = 1/M22 would diverge.
ScatteringAmplitudes amplitudes_from_transfer(const Mat2C& m, double k,
                                              double singularity_tol = 1e-12);

// Inverse dictionary; throws DomainError when t = 0. The reconstruction has
// det = 1 identically.
Mat2C transfer_from_amplitudes(const ScatteringAmplitudes& a);

// Transfer matrix of the potential translated by d:
// M -> e^{-ikd sigma3} M e^{ikd sigma3}, i.e. R^l -> e^{2ikd} R^l,
// R^r -> e^{-2ikd} R^r, T -> T.
Mat2C translate_transfer(const Mat2C& m, double k, double d);

}  // namespace tmc
