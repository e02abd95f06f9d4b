#pragma once

#include <stdexcept>
#include <string>

namespace spgc {

/// Base for every error the pipeline raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPGC_DEFINE_ERROR(Name)       \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  };

SPGC_DEFINE_ERROR(IoError)
SPGC_DEFINE_ERROR(MalformedRecord)
SPGC_DEFINE_ERROR(MissingId)
SPGC_DEFINE_ERROR(DirectoryUnreadable)
SPGC_DEFINE_ERROR(MalformedSource)
SPGC_DEFINE_ERROR(UnknownLabel)
SPGC_DEFINE_ERROR(InvalidQuery)
SPGC_DEFINE_ERROR(EndpointUnreachable)
SPGC_DEFINE_ERROR(EmptyLanguageList)
SPGC_DEFINE_ERROR(MalformedCountsFile)
SPGC_DEFINE_ERROR(MalformedMarkerFile)
SPGC_DEFINE_ERROR(EmptyBook)
SPGC_DEFINE_ERROR(InsufficientAuthors)
SPGC_DEFINE_ERROR(MissingArtifacts)

#undef SPGC_DEFINE_ERROR

}  // namespace spgc
