#pragma once

#include <stdexcept>
#include <string>

namespace odikit {

/// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A coordinate or parameter lies outside the valid range of its projection.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid pipeline configuration (bad scale, aperture, dimensions, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Two rasters that must share a shape do not.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// Input raster is too small for the requested operation.
class TooSmall : public Error {
public:
    using Error::Error;
};

/// Validity mask contains no true pixel.
class EmptyMask : public Error {
public:
    using Error::Error;
};

/// Destination projection requires coverage the source cannot provide.
class IncompatibleSpecs : public Error {
public:
    using Error::Error;
};

/// Window size does not divide the raster dimensions.
class IndivisibleWindow : public Error {
public:
    using Error::Error;
};

/// Perspective placement would reach past a pole.
class PoleOverlap : public Error {
public:
    using Error::Error;
};

/// Jacobian determinant is numerically zero.
class SingularJacobian : public Error {
public:
    using Error::Error;
};

/// File read/write failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace odikit
