#include "hetclust/group_metric.hpp"

#include <cmath>

namespace hetclust {

void validate(const GroupMetric& metric) {
    if (metric.group_id.empty()) {
        throw InputError("group id must be nonempty");
    }
    if (!std::isfinite(metric.estimate)) {
        throw InputError("group '" + metric.group_id + "': estimate must be finite");
    }
    if (!std::isfinite(metric.sd) || metric.sd <= 0.0) {
        throw InputError("group '" + metric.group_id +
                         "': sd must be finite and strictly positive");
    }
}

}  // namespace hetclust
