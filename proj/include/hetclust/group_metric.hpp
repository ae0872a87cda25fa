#pragma once

#include <string>

#include "hetclust/errors.hpp"

namespace hetclust {

/// One group's estimated effect and its standard error: a treatment
/// lift, a treatment-effect estimate, or a classifier rate. The scalar
/// unit is irrelevant to the clustering machinery.
struct GroupMetric {
    std::string group_id;
    double estimate = 0.0;
    double sd = 0.0;
};

/// Throws unless estimate is finite and sd is strictly positive and finite.
void validate(const GroupMetric& metric);

}  // namespace hetclust
