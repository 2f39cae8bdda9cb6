#pragma once

#include <memory>
#include <mutex>

#include "tricrit/model.hpp"

namespace tricrit {

struct Interaction::Impl {
    LogP log_p, dlog_p;
    double decay_eps = 1.0;
    double decay_C = 0.0;
    mutable std::mutex mu;
    mutable std::shared_ptr<const SeriesCache> cache;  // built in potential.cpp
};

}  // namespace tricrit
