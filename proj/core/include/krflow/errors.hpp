#ifndef KRFLOW_ERRORS_HPP
#define KRFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace krflow {

/// Base class for all library errors. The concrete type names the failed
/// precondition or runtime condition.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Time-window and input validation.
struct OutOfWindow : Error { using Error::Error; };
struct InvalidTime : Error { using Error::Error; };
struct InvalidProfile : Error { using Error::Error; };

// Metric degeneration along a run.
struct PositivityLoss : Error { using Error::Error; };
struct StepFloor : Error { using Error::Error; };

// Monitor/sampling preconditions.
struct InsufficientSamples : Error { using Error::Error; };
struct InsufficientSnapshots : Error { using Error::Error; };
struct SampleAtZero : Error { using Error::Error; };
struct SingularMap : Error { using Error::Error; };
struct UnknownBasePoint : Error { using Error::Error; };
struct SampleMismatch : Error { using Error::Error; };

// Configuration and I/O.
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

} // namespace krflow

#endif
