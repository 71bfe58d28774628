#ifndef BOUNDPOP_ERROR_HPP
#define BOUNDPOP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace boundpop {

enum class Errc {
  malformed_input,
  empty_histogram,
  duplicate_multiplicity,
  no_singletons,
  insufficient_rare_classes,
  order_too_large,
  recurrence_breakdown,
  invalid_recurrence,
  eigensolve_failed,
  bootstrap_exhausted,
  invalid_argument,
};

const char *to_string(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

} // namespace boundpop

#endif
