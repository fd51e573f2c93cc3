#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "hifbe/types.hpp"

namespace hifb {

enum class Errc {
  catalog_miss,        // unknown problem id
  oracle_fault,        // oracle returned a non-finite value where finite required
  exponent_mismatch,   // declared Holder exponent too large for sampled gradient
  bracket_too_small,   // 1D minimizer kept hitting the bracket boundary
  prox_unbounded,      // subproblem value diverged below -1/tol_val
  envelope_undefined,  // envelope is -inf at the query point
  capability_missing,  // operation needs oracle data that was not provided
  gamma_too_large,     // parameter violates a positivity precondition
  prox_bound_violation,// lower-bound search detected an unbounded model
  lemma_violation,     // sampled quantity contradicts a basic inequality
  domain_error,        // query point outside the effective domain
  dependency_missing,  // required constants not computed yet
  bad_config           // invalid solver configuration
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg, std::optional<Vec> witness = std::nullopt)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code),
        witness_(std::move(witness)) {}

  Errc code() const { return code_; }
  const std::optional<Vec>& witness() const { return witness_; }

 private:
  Errc code_;
  std::optional<Vec> witness_;
};

}  // namespace hifb
