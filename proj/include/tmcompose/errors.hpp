#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace tmc {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A matrix handed to the adjugate-based inverse was not unimodular.
class UnimodularityError : public Error {
public:
    UnimodularityError(const std::string& what, std::complex<double> det)
        : Error(what), det_(det) {}
    std::complex<double> det() const { return det_; }

private:
    std::complex<double> det_;
};

// M22 vanished, so the transmission amplitude 1/M22 diverges.
class SpectralSingularityError : public Error {
public:
    SpectralSingularityError(const std::string& what, std::complex<double> m22)
        : Error(what), m22_(m22) {}
    std::complex<double> m22() const { return m22_; }

private:
    std::complex<double> m22_;
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double tau, long steps)
        : Error(what), tau_(tau), steps_(steps) {}
    double tau() const { return tau_; }
    long steps() const { return steps_; }

private:
    double tau_ = 0;
    long steps_ = 0;
};

// A jet was asked for more derivatives than it carries.
class JetOrderError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

// Invalid argument values (bad piece intervals, empty supports, index range).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent run configuration (CLI).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace tmc
