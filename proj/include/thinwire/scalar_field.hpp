#pragma once

#include <functional>

#include "thinwire/geometry.hpp"

namespace thinwire {

/// Value and planar gradient of a scalar field u(x, y) at one point.
struct ScalarSample {
  Complex value;
  Complex dx;
  Complex dy;
};

using ScalarField = std::function<ScalarSample(Point2)>;

}  // namespace thinwire
