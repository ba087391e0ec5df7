#pragma once

#include <stdexcept>
#include <string>

namespace chebmark {

enum class errc {
    non_monotone_endpoints,
    odd_endpoint_count,
    gap_index_out_of_range,
    invalid_parameters,
    no_convergence,
    no_sign_change,
    pole_too_close,
    singular_period_system,
    grid_too_coarse,
    out_of_box,
    quantization_violated,
    zero_count_mismatch,
    numerator_residual_too_large,
    outside_bands,
    outside_e,
    parameter_out_of_range,
    not_in_star_class,
    not_normalized,
    sampling_exhausted,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace chebmark
