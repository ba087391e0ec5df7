#include "chebmark/error.hpp"

namespace chebmark {

const char* errc_name(errc code) {
    switch (code) {
        case errc::non_monotone_endpoints: return "NonMonotoneEndpoints";
        case errc::odd_endpoint_count: return "OddEndpointCount";
        case errc::gap_index_out_of_range: return "GapIndexOutOfRange";
        case errc::invalid_parameters: return "InvalidParameters";
        case errc::no_convergence: return "NoConvergence";
        case errc::no_sign_change: return "NoSignChange";
        case errc::pole_too_close: return "PoleTooClose";
        case errc::singular_period_system: return "SingularPeriodSystem";
        case errc::grid_too_coarse: return "GridTooCoarse";
        case errc::out_of_box: return "OutOfBox";
        case errc::quantization_violated: return "QuantizationViolated";
        case errc::zero_count_mismatch: return "ZeroCountMismatch";
        case errc::numerator_residual_too_large: return "NumeratorResidualTooLarge";
        case errc::outside_bands: return "OutsideBands";
        case errc::outside_e: return "OutsideE";
        case errc::parameter_out_of_range: return "ParameterOutOfRange";
        case errc::not_in_star_class: return "NotInStarClass";
        case errc::not_normalized: return "NotNormalized";
        case errc::sampling_exhausted: return "SamplingExhausted";
    }
    return "UnknownError";
}

}  // namespace chebmark
