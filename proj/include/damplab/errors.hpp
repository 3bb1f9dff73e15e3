#ifndef DAMPLAB_ERRORS_HPP
#define DAMPLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace damplab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define DAMPLAB_ERROR_TYPE(Name)            \
  struct Name : Error {                     \
    explicit Name(const std::string& what)  \
        : Error(std::string(#Name ": ") + what) {} \
  }

DAMPLAB_ERROR_TYPE(SpaceMismatch);
DAMPLAB_ERROR_TYPE(NotHermitian);
DAMPLAB_ERROR_TYPE(NotPositiveDefinite);
DAMPLAB_ERROR_TYPE(AmbiguousRank);
DAMPLAB_ERROR_TYPE(SingularBlock);
DAMPLAB_ERROR_TYPE(EmptyRegion);
DAMPLAB_ERROR_TYPE(IndefiniteMaterial);
DAMPLAB_ERROR_TYPE(NotNormalized);
DAMPLAB_ERROR_TYPE(ShiftSingular);
DAMPLAB_ERROR_TYPE(HypothesisViolated);
DAMPLAB_ERROR_TYPE(NoAngleFound);
DAMPLAB_ERROR_TYPE(InsufficientSeries);
DAMPLAB_ERROR_TYPE(NonPositiveEnergy);
DAMPLAB_ERROR_TYPE(SolveFailure);
DAMPLAB_ERROR_TYPE(ConfigError);

#undef DAMPLAB_ERROR_TYPE

}  // namespace damplab

#endif
