#pragma once

#include <stdexcept>
#include <string>

namespace hfp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HFP_DEFINE_ERROR(Name)              \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  };

HFP_DEFINE_ERROR(UnsupportedDimension)
HFP_DEFINE_ERROR(IndexOutOfRange)
HFP_DEFINE_ERROR(DimensionMismatch)
HFP_DEFINE_ERROR(ConstructionFailure)
HFP_DEFINE_ERROR(DegenerateProjector)
HFP_DEFINE_ERROR(SearchFailure)
HFP_DEFINE_ERROR(NoFeasiblePoint)
HFP_DEFINE_ERROR(IncompleteSet)
HFP_DEFINE_ERROR(UnknownAnchorState)
HFP_DEFINE_ERROR(UnclassifiableBasis)
HFP_DEFINE_ERROR(SubspaceConstructionFailure)
HFP_DEFINE_ERROR(ConfigError)

#undef HFP_DEFINE_ERROR

}  // namespace hfp
