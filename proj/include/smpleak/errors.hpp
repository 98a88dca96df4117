#ifndef SMPLEAK_ERRORS_HPP
#define SMPLEAK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace smpleak {

// Malformed inputs: bad distributions, out-of-range indices, model/stage
// mismatches, unparseable files.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Exact enumeration would exceed the configured cell cap.
class CapExceededError : public ValidationError {
public:
  CapExceededError(const std::string& what, std::uint64_t needed, std::uint64_t cap)
      : ValidationError(what), needed_cells(needed), cap_cells(cap) {}
  std::uint64_t needed_cells;
  std::uint64_t cap_cells;
};

// An iterative solver ran out of iterations; carries the last bracket.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double lower, double upper, int iterations)
      : std::runtime_error(what), lower(lower), upper(upper), iterations(iterations) {}
  double lower;
  double upper;
  int iterations;
};

// A randomized search (Newman / Babai-Kimmel candidate sets) exhausted its
// restart budget without a verified witness.
class SearchError : public std::runtime_error {
public:
  SearchError(const std::string& what, int restarts_used)
      : std::runtime_error(what), restarts_used(restarts_used) {}
  int restarts_used;
};

// A transform's measured quantity violated its claimed bound.
class BoundCheckError : public std::runtime_error {
public:
  BoundCheckError(const std::string& what, double claimed, double measured)
      : std::runtime_error(what), claimed(claimed), measured(measured) {}
  double claimed;
  double measured;
};

}  // namespace smpleak

#endif
