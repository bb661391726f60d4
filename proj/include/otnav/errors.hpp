#pragma once

#include <stdexcept>
#include <string>

namespace otnav {

// Root of every error the library throws. `kind()` is a stable machine-readable
// tag used by the CLI error record.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define OTNAV_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

OTNAV_DEFINE_ERROR(RangeError);
OTNAV_DEFINE_ERROR(OverlapError);
OTNAV_DEFINE_ERROR(ConfigError);
OTNAV_DEFINE_ERROR(InfeasibleError);
OTNAV_DEFINE_ERROR(ImbalanceError);
OTNAV_DEFINE_ERROR(MalformedPlanError);
OTNAV_DEFINE_ERROR(StallError);
OTNAV_DEFINE_ERROR(TooLargeError);
OTNAV_DEFINE_ERROR(InfeasibleMpcError);
OTNAV_DEFINE_ERROR(ParseError);
OTNAV_DEFINE_ERROR(IoError);

#undef OTNAV_DEFINE_ERROR

}  // namespace otnav
