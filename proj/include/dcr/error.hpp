#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcr {

enum class errc {
    unknown_event,
    unknown_principal,
    not_included,
    conditions_unmet,
    unauthorized,
    invalid_graph,
    replay_failed,
    lasso_not_replayable,
    order_not_permutation,
    state_bound_exceeded,
    invalid_run,
    repeated_event,
};

const char* to_string(errc code) noexcept;

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message) : std::runtime_error(message), code_{code} {}

    [[nodiscard]] errc code() const noexcept { return code_; }

private:
    errc code_;
};

/// Rejected execution of a single event. For conditions_unmet, blocking()
/// lists every included condition source that has not been executed.
class execution_error : public error {
public:
    execution_error(errc code, const std::string& message, std::vector<std::string> blocking = {})
        : error(code, message), blocking_{std::move(blocking)} {}

    [[nodiscard]] const std::vector<std::string>& blocking() const noexcept { return blocking_; }

private:
    std::vector<std::string> blocking_;
};

/// A run that failed part-way; step() is the 0-based index of the failing
/// step and cause() the underlying execution error.
class replay_error : public error {
public:
    replay_error(std::size_t step, execution_error cause);

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] const execution_error& cause() const noexcept { return cause_; }

private:
    std::size_t step_;
    execution_error cause_;
};

/// Lasso whose loop cannot be repeated; iteration 0 denotes the prefix.
class lasso_error : public error {
public:
    lasso_error(std::size_t iteration, std::size_t step, execution_error cause);

    [[nodiscard]] std::size_t iteration() const noexcept { return iteration_; }
    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] const execution_error& cause() const noexcept { return cause_; }

private:
    std::size_t iteration_;
    std::size_t step_;
    execution_error cause_;
};

}  // namespace dcr
