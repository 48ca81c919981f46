#ifndef COBAREXT_ERROR_HPP
#define COBAREXT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cbx {

enum class Err {
    none = 0,
    negative_valuation,
    insufficient_divisibility,
    precision_exhausted,
    exponent_overflow,
    infinite_basis,
    integrality_failure,
    window_too_small,
    not_a_coideal,
    centrality_violation,
    window_guard_violation,
    series_precision,
    rule_gap,
    not_contained,
    unknown_scenario,
    bad_config,
    internal,
};

const char* err_name(Err e);

struct CbxError : std::runtime_error {
    Err code;
    CbxError(Err c, const std::string& msg)
        : std::runtime_error(std::string(err_name(c)) + ": " + msg), code(c) {}
};

[[noreturn]] inline void fail(Err c, const std::string& msg) { throw CbxError(c, msg); }

}  // namespace cbx

#endif
