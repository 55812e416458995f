#pragma once

#include <stdexcept>
#include <string>

namespace geotrack {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the formula is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative solver failed to converge (e.g. nearly antipodal Vincenty inputs).
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Covariance could not be factored even after PSD projection.
class FactorizationFailure : public Error {
public:
    using Error::Error;
};

/// H P H^T + R is not invertible.
class SingularInnovation : public Error {
public:
    using Error::Error;
};

// AIS / NMEA decoding errors.

class MalformedSentence : public Error {
public:
    using Error::Error;
};

class ChecksumMismatch : public Error {
public:
    using Error::Error;
};

class InvalidCharacter : public Error {
public:
    using Error::Error;
};

class IncompleteMessage : public Error {
public:
    using Error::Error;
};

class ConflictingFragments : public Error {
public:
    using Error::Error;
};

class WrongMessageType : public Error {
public:
    using Error::Error;
};

class TruncatedPayload : public Error {
public:
    using Error::Error;
};

/// Scenario or configuration text could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace geotrack
