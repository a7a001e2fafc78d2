#pragma once

#include <stdexcept>
#include <string>

namespace polyzero {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateTriangle : Error {
    using Error::Error;
};
struct NonPlanarFace : Error {
    using Error::Error;
};
struct NonManifoldEdge : Error {
    using Error::Error;
};
struct ZeroAreaFace : Error {
    using Error::Error;
};
struct NotConcyclic : Error {
    using Error::Error;
};
struct OrientationAmbiguous : Error {
    using Error::Error;
};
struct InvalidMesh : Error {
    using Error::Error;
};
struct AngleOutOfRange : Error {
    using Error::Error;
};
struct TooManyNodes : Error {
    using Error::Error;
};
struct CycleSpaceTooLarge : Error {
    using Error::Error;
};
struct SignSpaceTooLarge : Error {
    using Error::Error;
};
struct PoleAtMinusOne : Error {
    using Error::Error;
};
struct DegenerateInput : Error {
    using Error::Error;
};
struct InvalidParameters : Error {
    using Error::Error;
};
struct ShapeMismatch : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace polyzero
