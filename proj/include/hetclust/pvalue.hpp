#pragma once

#include <cmath>
#include <compare>

#include "hetclust/errors.hpp"

namespace hetclust {

/// A probability in [0, 1]. Construction outside that range throws.
class PValue {
public:
    explicit PValue(double value) : value_(value) {
        if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
            throw DomainError("p-value must lie in [0, 1]");
        }
    }

    double value() const noexcept { return value_; }

    friend auto operator<=>(const PValue&, const PValue&) = default;

private:
    double value_;
};

}  // namespace hetclust
