#pragma once

#include <stdexcept>
#include <string>

namespace strongcat {

/// Base class of every error raised by the library.
///
/// Usage errors (bad configuration, malformed input files) derive from
/// UsageError; everything else is a numerical failure. The CLI maps the two
/// families onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

#define STRONGCAT_DEFINE_ERROR(Name, Base)                                   \
  class Name : public Base {                                                 \
   public:                                                                   \
    explicit Name(const std::string& what) : Base(#Name ": " + what) {}      \
  };

// phase-space core
STRONGCAT_DEFINE_ERROR(TruncationTooSmall, NumericalError)
STRONGCAT_DEFINE_ERROR(DegenerateSuperposition, NumericalError)
STRONGCAT_DEFINE_ERROR(ZeroMeanPhoton, NumericalError)

// strong-field engine
STRONGCAT_DEFINE_ERROR(ZeroField, NumericalError)
STRONGCAT_DEFINE_ERROR(NoReturns, NumericalError)
STRONGCAT_DEFINE_ERROR(GridTooCoarse, NumericalError)
STRONGCAT_DEFINE_ERROR(NyquistViolation, NumericalError)

// conditioning
STRONGCAT_DEFINE_ERROR(NullConditioning, NumericalError)
STRONGCAT_DEFINE_ERROR(ConvergenceFailure, NumericalError)

// tomography
STRONGCAT_DEFINE_ERROR(IllConditioned, NumericalError)
STRONGCAT_DEFINE_ERROR(NonConvergence, NumericalError)
STRONGCAT_DEFINE_ERROR(InsufficientPhases, UsageError)

// quantum spectrometer
STRONGCAT_DEFINE_ERROR(EmptySelection, NumericalError)

// io / cli
STRONGCAT_DEFINE_ERROR(ConfigError, UsageError)
STRONGCAT_DEFINE_ERROR(FormatError, UsageError)

#undef STRONGCAT_DEFINE_ERROR

}  // namespace strongcat
