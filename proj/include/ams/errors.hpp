#pragma once

#include <stdexcept>
#include <string>

namespace ams {

/// Invalid argument or configuration (parameter outside its mathematical domain).
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed to converge or produced an unusable result.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative algorithm exceeded its iteration cap.
class nontermination_error : public numerical_error {
 public:
  explicit nontermination_error(const std::string& what) : numerical_error(what) {}
};

}  // namespace ams
