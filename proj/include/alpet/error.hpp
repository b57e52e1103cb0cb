#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace alpet {

enum class Errc {
    invalid_argument,
    count_mismatch,
    duplicate_id,
    non_finite,
    malformed,
    already_labeled,
    missing_label,
    capacity,
    zero_norm,
    dimension_mismatch,
    empty_set,
    invalid_distribution,
    single_class,
    missing_class,
    format,
    truncated,
    io,
    provider,
    shortfall,
    exhausted,
    leakage,
    missing_baseline,
    missing_grid_point,
};

std::string_view to_string(Errc code) noexcept;

// Every data/format failure in the library is an alpet::Error. The CLI maps
// invalid_argument to exit code 1 and everything else to 2.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

} // namespace alpet
