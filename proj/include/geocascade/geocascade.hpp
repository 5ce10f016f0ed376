#pragma once

#include "geocascade/bounds_lower.hpp"
#include "geocascade/bounds_upper.hpp"
#include "geocascade/cascade.hpp"
#include "geocascade/config.hpp"
#include "geocascade/errors.hpp"
#include "geocascade/geometry.hpp"
#include "geocascade/harness.hpp"
#include "geocascade/io.hpp"
#include "geocascade/random.hpp"
#include "geocascade/rgg.hpp"
#include "geocascade/specfun.hpp"
#include "geocascade/validate.hpp"
