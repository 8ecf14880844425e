#pragma once

#include <stdexcept>
#include <string>

namespace xva {

/// Raised for invalid inputs and failed invariants. `field()` names the
/// offending parameter when one applies (empty otherwise).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, std::string field = {})
        : std::runtime_error(what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace xva
