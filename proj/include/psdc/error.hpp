#pragma once

#include <stdexcept>
#include <string>

namespace psdc {

// Error codes shared between the library and the CLI report format.
enum class Errc {
  not_positive_definite,
  not_symmetric,
  not_pseudosymmetric,
  not_definite,
  singular,
  no_convergence,
  breakdown,
  ill_conditioned_projector,
  rank_mismatch,
  split_degenerate,
  modulus_out_of_range,
  invalid_argument,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void throw_error(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace psdc
