#pragma once

#include <stdexcept>
#include <string>

namespace wavelab {

/** Base class for all wavelab errors. */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A spectrum that should represent a real field has lost Hermitian
// symmetry, usually because a multiplier was neither real-even nor
// conjugate-symmetric.
class NonHermitianSpectrum : public Error {
public:
    using Error::Error;
};

// Helmholtz-type inversion requested with a sign for which the symbol
// denominator may vanish.
class InvalidSign : public Error {
public:
    using Error::Error;
};

// A parameter tuple violates one of its validity constraints.
class InvalidParams : public Error {
public:
    using Error::Error;
};

// Sobolev index outside the admissible range of an estimate.
class InvalidIndexRange : public Error {
public:
    using Error::Error;
};

// A time step produced NaN or infinity.
class NonFiniteField : public Error {
public:
    using Error::Error;
};

// Configuration file failed to parse or validate.
class ConfigError : public Error {
public:
    using Error::Error;
};

}
