#include "alpet/error.hpp"

namespace alpet {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::count_mismatch: return "count mismatch";
    case Errc::duplicate_id: return "duplicate id";
    case Errc::non_finite: return "non-finite value";
    case Errc::malformed: return "malformed input";
    case Errc::already_labeled: return "already labeled";
    case Errc::missing_label: return "missing gold label";
    case Errc::capacity: return "budget exceeds pool capacity";
    case Errc::zero_norm: return "zero-norm vector";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::empty_set: return "empty set";
    case Errc::invalid_distribution: return "invalid distribution";
    case Errc::single_class: return "single class";
    case Errc::missing_class: return "missing class";
    case Errc::format: return "format error";
    case Errc::truncated: return "truncated file";
    case Errc::io: return "i/o error";
    case Errc::provider: return "provider failure";
    case Errc::shortfall: return "budget shortfall";
    case Errc::exhausted: return "pool exhausted";
    case Errc::leakage: return "train/test leakage";
    case Errc::missing_baseline: return "missing baseline curve";
    case Errc::missing_grid_point: return "missing grid point";
    }
    return "unknown";
}

void fail(Errc code, const std::string& what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

} // namespace alpet
