#include "gcoh/error.h"

namespace gcoh {

std::string_view kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument:
            return "invalid-argument";
        case ErrorKind::shape_error:
            return "shape-error";
        case ErrorKind::not_symmetric:
            return "not-symmetric";
        case ErrorKind::uncertainty_violation:
            return "uncertainty-violation";
        case ErrorKind::not_completely_positive:
            return "not-completely-positive";
        case ErrorKind::not_faithful:
            return "not-faithful";
        case ErrorKind::invariant_violation:
            return "invariant-violation";
        case ErrorKind::numeric_error:
            return "numeric-error";
        case ErrorKind::unsupported:
            return "unsupported";
        case ErrorKind::parse_error:
            return "parse-error";
        case ErrorKind::io_error:
            return "io-error";
        case ErrorKind::usage_error:
            return "usage-error";
    }
    return "unknown";
}

}  // namespace gcoh
