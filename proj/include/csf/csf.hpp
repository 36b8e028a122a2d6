#pragma once

#include "csf/core.hpp"
#include "csf/geometry.hpp"
#include "csf/geodesic.hpp"
#include "csf/spline.hpp"
#include "csf/flow.hpp"
#include "csf/monitor.hpp"
#include "csf/cover.hpp"
#include "csf/scenario.hpp"
#include "csf/runner.hpp"
