#pragma once

#include <stdexcept>
#include <string>

namespace classd {

// Base of every error raised by the library. The CLI maps these onto exit
// codes; callers that do not care about the category can catch this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CLASSD_DEFINE_ERROR(Name)            \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

// audio_io
CLASSD_DEFINE_ERROR(MalformedHeader);
CLASSD_DEFINE_ERROR(UnsupportedFormat);
CLASSD_DEFINE_ERROR(IoFailure);

// dsp_chain / verification
CLASSD_DEFINE_ERROR(InvalidArgument);
CLASSD_DEFINE_ERROR(MalformedStream);
CLASSD_DEFINE_ERROR(LengthMismatch);

// profiler
CLASSD_DEFINE_ERROR(UnknownBehavior);
CLASSD_DEFINE_ERROR(MissingWeight);
CLASSD_DEFINE_ERROR(CounterOverflow);

// dse
CLASSD_DEFINE_ERROR(AllZeroSizes);
CLASSD_DEFINE_ERROR(TooManyBehaviors);
CLASSD_DEFINE_ERROR(NoFeasibleOption);

// config / fixture files
CLASSD_DEFINE_ERROR(ParseError);

#undef CLASSD_DEFINE_ERROR

}  // namespace classd
