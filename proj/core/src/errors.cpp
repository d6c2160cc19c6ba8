#include "statecap/errors.hpp"

#include <sstream>
#include <utility>

namespace statecap {

namespace {

std::string join_ids(const std::vector<std::string>& ids, std::size_t limit = 20) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i > 0) os << ", ";
    os << ids[i];
  }
  if (ids.size() > limit) os << ", ... (" << ids.size() - limit << " more)";
  return os.str();
}

std::string coverage_message(const std::vector<std::string>& missing,
                             const std::vector<std::string>& unexpected) {
  std::ostringstream os;
  os << "prediction coverage mismatch:";
  if (!missing.empty()) os << " missing predictions for [" << join_ids(missing) << "]";
  if (!unexpected.empty()) {
    if (!missing.empty()) os << ";";
    os << " predictions without annotation for [" << join_ids(unexpected) << "]";
  }
  return os.str();
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

CoverageError::CoverageError(std::vector<std::string> missing, std::vector<std::string> unexpected)
    : Error(coverage_message(missing, unexpected)),
      missing_(std::move(missing)),
      unexpected_(std::move(unexpected)) {}

}  // namespace statecap
