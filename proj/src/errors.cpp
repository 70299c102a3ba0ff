#include "phi3/errors.hpp"

namespace phi3 {

namespace {

std::string join(const std::vector<std::string>& problems) {
  std::string msg = "invalid configuration";
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(join(problems)), problems_(std::move(problems)) {}

}  // namespace phi3
