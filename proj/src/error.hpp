#ifndef FLOPART_ERROR_HPP
#define FLOPART_ERROR_HPP

#include <stdexcept>
#include <string>

namespace flopart {

// Error categories, kept coarse so the C API and CLI can map them to
// status / exit codes without string matching.
enum class errc {
  invalid_argument,  // bad numeric input, domain violation
  validation,        // label or file content rejected
  infeasible,        // no model satisfies the label constraints
  io,                // file system / parse failure
  too_large,         // instance exceeds a hard size limit
  internal           // broken internal invariant
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void throw_error(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace flopart

#endif
