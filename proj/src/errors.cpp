#include "fcalab/errors.hpp"

#include <utility>

namespace fcalab {

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& i : issues) {
              msg += "\n  - " + i;
          }
          return msg;
      }()),
      issues_(std::move(issues))
{
}

} // namespace fcalab
