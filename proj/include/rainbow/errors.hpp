#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rainbow {

// Bad arguments to an operation (sizes, budgets, probabilities).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well formed but outside the operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The constructions only apply to certain sparse structures; this carries the
// offending piece so callers can report it.
class StructureUnsupported : public std::runtime_error {
 public:
  StructureUnsupported(const std::string& what, std::vector<int> vertices)
      : std::runtime_error(what), vertices_(std::move(vertices)) {}
  const std::vector<int>& vertices() const { return vertices_; }

 private:
  std::vector<int> vertices_;
};

class OutOfRegime : public std::runtime_error {
 public:
  OutOfRegime(const std::string& what, std::vector<int> vertices = {})
      : std::runtime_error(what), vertices_(std::move(vertices)) {}
  const std::vector<int>& vertices() const { return vertices_; }

 private:
  std::vector<int> vertices_;
};

class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rainbow
