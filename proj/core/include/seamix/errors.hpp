#ifndef SEAMIX_ERRORS_HPP
#define SEAMIX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace seamix {

// Error categories. The CLI maps these to process exit codes, so new
// categories must be added here rather than thrown as ad-hoc exceptions.
enum class errc {
  format,             // malformed container/header
  unsupported,        // recognized but unsupported encoding
  empty_input,        // operation requires at least one sample/frame
  size,               // bad transform size (e.g. non power of two)
  config,             // invalid parameter combination (e.g. non-COLA hop)
  range,              // value outside the documented domain
  too_short,          // input too short for the requested analysis
  shape,              // matrix shape mismatch
  incompatible_tempo, // stretch ratio outside the vocoder range
  low_confidence,     // degenerate tempo estimate, caller must force
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace seamix

#endif  // SEAMIX_ERRORS_HPP
