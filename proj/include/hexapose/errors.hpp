#pragma once

#include <stdexcept>
#include <string>

namespace hexapose {

/// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Euler extraction attempted too close to |ry| = 90 deg.
class GimbalLock : public Error {
 public:
  using Error::Error;
};

/// Joint layout is unusable (coincident joints, vanishing leg, ...).
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

/// Iterative solver did not reach its tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A leg deflection exceeds the plausibility bound for thermal drift.
class SanityBound : public Error {
 public:
  using Error::Error;
};

/// Steel segment length came out non-positive for some leg.
class NonPositiveSegment : public Error {
 public:
  using Error::Error;
};

/// Probe points are coplanar/coincident; a sphere cannot be determined.
class DegeneratePoints : public Error {
 public:
  using Error::Error;
};

/// The three ball centers are (nearly) collinear.
class CollinearBalls : public Error {
 public:
  using Error::Error;
};

/// Measured ball triangle is not congruent with the stored one.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Session holds no target record (or the given index is not a target).
class MissingTarget : public Error {
 public:
  using Error::Error;
};

/// Session holds no usable reference measurement.
class MissingReference : public Error {
 public:
  using Error::Error;
};

/// Heating schedule does not cover a requested instant.
class ScheduleGap : public Error {
 public:
  using Error::Error;
};

/// Configuration or input-file problem (missing file, bad schema, bad value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while writing results.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hexapose
