#pragma once

#include <stdexcept>
#include <string>

namespace iwalab {

enum class errc {
    invalid_argument,
    precision_mismatch,
    not_a_unit,
    no_preparation,
    insufficient_truncation,
    insufficient_precision,
    oracle_inconclusive,
    not_perfect,
    group_mismatch,
    unsupported_group,
    incomplete_datum,
    parse_error,
    validation_error,
};

inline const char* to_string(errc code) noexcept {
    switch (code) {
        case errc::invalid_argument: return "invalid argument";
        case errc::precision_mismatch: return "precision mismatch";
        case errc::not_a_unit: return "not a unit";
        case errc::no_preparation: return "no Weierstrass preparation";
        case errc::insufficient_truncation: return "insufficient truncation";
        case errc::insufficient_precision: return "insufficient precision";
        case errc::oracle_inconclusive: return "oracle inconclusive";
        case errc::not_perfect: return "pairing not perfect";
        case errc::group_mismatch: return "group mismatch";
        case errc::unsupported_group: return "unsupported group";
        case errc::incomplete_datum: return "incomplete datum";
        case errc::parse_error: return "parse error";
        case errc::validation_error: return "validation error";
    }
    return "unknown error";
}

/// The single exception type thrown by the library. `code()` identifies the
/// failure class; `what()` carries a human-readable detail line.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

}  // namespace iwalab
