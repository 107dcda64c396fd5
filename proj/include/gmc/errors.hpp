#pragma once

#include <stdexcept>
#include <string>

namespace gmc {

/// Base of every error thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GMC_DEFINE_ERROR(name)                                   \
  class name : public error {                                    \
   public:                                                       \
    explicit name(const std::string& what) : error(#name ": " + what) {} \
  }

GMC_DEFINE_ERROR(DomainError);
GMC_DEFINE_ERROR(RuleError);
GMC_DEFINE_ERROR(CodomainMismatch);
GMC_DEFINE_ERROR(InfeasibleEnumeration);
GMC_DEFINE_ERROR(ChainMismatch);
GMC_DEFINE_ERROR(PartitionMismatch);
GMC_DEFINE_ERROR(SideMismatch);
GMC_DEFINE_ERROR(BoundaryMismatch);
GMC_DEFINE_ERROR(CellError);
GMC_DEFINE_ERROR(UnboundedComposite);
GMC_DEFINE_ERROR(QuantaleError);
GMC_DEFINE_ERROR(NotInvertibleNuM);
GMC_DEFINE_ERROR(NoStarStructure);
GMC_DEFINE_ERROR(BoundTooLargeToEnumerate);
GMC_DEFINE_ERROR(PresentationError);

#undef GMC_DEFINE_ERROR

}  // namespace gmc
