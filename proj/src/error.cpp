#include "dcr/error.hpp"

namespace dcr {

const char* to_string(errc code) noexcept {
    switch (code) {
        case errc::unknown_event: return "unknown-event";
        case errc::unknown_principal: return "unknown-principal";
        case errc::not_included: return "not-included";
        case errc::conditions_unmet: return "conditions-unmet";
        case errc::unauthorized: return "unauthorized";
        case errc::invalid_graph: return "invalid-graph";
        case errc::replay_failed: return "replay-failed";
        case errc::lasso_not_replayable: return "lasso-not-replayable";
        case errc::order_not_permutation: return "order-not-permutation";
        case errc::state_bound_exceeded: return "state-bound-exceeded";
        case errc::invalid_run: return "invalid-run";
        case errc::repeated_event: return "repeated-event";
    }
    return "unknown";
}

replay_error::replay_error(std::size_t step, execution_error cause)
    : error(errc::replay_failed, "step " + std::to_string(step) + ": " + cause.what()),
      step_{step},
      cause_{std::move(cause)} {}

lasso_error::lasso_error(std::size_t iteration, std::size_t step, execution_error cause)
    : error(errc::lasso_not_replayable,
            (iteration == 0 ? std::string("prefix") : "loop iteration " + std::to_string(iteration)) +
                ", step " + std::to_string(step) + ": " + cause.what()),
      iteration_{iteration},
      step_{step},
      cause_{std::move(cause)} {}

}  // namespace dcr
