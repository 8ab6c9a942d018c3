#include "qrad/errors.hpp"

namespace qrad {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Incompatibility: return "incompatibility";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Resolution: return "resolution";
  }
  return "unknown";
}

}  // namespace qrad
