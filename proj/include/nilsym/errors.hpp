#pragma once

#include <stdexcept>
#include <string>

namespace nilsym {

/// Base class for all typed library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define NILSYM_DEFINE_ERROR(Name)                                 \
  struct Name : Error {                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

NILSYM_DEFINE_ERROR(InvalidInput);
NILSYM_DEFINE_ERROR(InvalidForm);
NILSYM_DEFINE_ERROR(AmbientDegenerate);
NILSYM_DEFINE_ERROR(CenterDegenerate);
NILSYM_DEFINE_ERROR(JNotInjective);
NILSYM_DEFINE_ERROR(NotSubalgebra);
NILSYM_DEFINE_ERROR(JacobiFailure);
NILSYM_DEFINE_ERROR(NotNaturallyReductive);
NILSYM_DEFINE_ERROR(NotReductiveDecomposition);
NILSYM_DEFINE_ERROR(InvalidDataSet);
NILSYM_DEFINE_ERROR(NotCompact);
NILSYM_DEFINE_ERROR(DecompositionFailure);
NILSYM_DEFINE_ERROR(NoBoostPart);
NILSYM_DEFINE_ERROR(NotScalarMultiple);
NILSYM_DEFINE_ERROR(NoTimelikeFixed);
NILSYM_DEFINE_ERROR(ZNotInGbar);
NILSYM_DEFINE_ERROR(ZNotCentral);
NILSYM_DEFINE_ERROR(NotADerivation);
NILSYM_DEFINE_ERROR(StepTooLarge);
NILSYM_DEFINE_ERROR(TheoremMismatch);
NILSYM_DEFINE_ERROR(SchemaError);

#undef NILSYM_DEFINE_ERROR

}  // namespace nilsym
