#include "parisian/errors.hpp"

namespace parisian::detail {

void throw_parameter(const std::string& what) { throw ParameterError(what); }

}  // namespace parisian::detail
