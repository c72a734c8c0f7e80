#ifndef CROWDRANK_ERRORS_HPP
#define CROWDRANK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace crowdrank {

/// Base class for all library errors. `type()` is a stable machine-readable
/// tag (used by the CLI for JSON error output).
class Error : public std::runtime_error {
 public:
  Error(std::string type, const std::string& what)
      : std::runtime_error(what), type_(std::move(type)) {}
  const std::string& type() const { return type_; }

 private:
  std::string type_;
};

#define CROWDRANK_DEFINE_ERROR(Name)                          \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

CROWDRANK_DEFINE_ERROR(DimensionMismatch);
CROWDRANK_DEFINE_ERROR(SelfComparison);
CROWDRANK_DEFINE_ERROR(DomainError);
CROWDRANK_DEFINE_ERROR(NonFiniteLikelihood);
CROWDRANK_DEFINE_ERROR(LineSearchFailure);
CROWDRANK_DEFINE_ERROR(SingularSystem);
CROWDRANK_DEFINE_ERROR(NoOrderedPairs);
CROWDRANK_DEFINE_ERROR(ZeroVariance);
CROWDRANK_DEFINE_ERROR(UnknownItem);
CROWDRANK_DEFINE_ERROR(UnknownFeature);
CROWDRANK_DEFINE_ERROR(ParseError);

#undef CROWDRANK_DEFINE_ERROR

}  // namespace crowdrank

#endif  // CROWDRANK_ERRORS_HPP
