#pragma once

#include "tqd/calibrate.hpp"
#include "tqd/config.hpp"
#include "tqd/csv.hpp"
#include "tqd/drive.hpp"
#include "tqd/params.hpp"
#include "tqd/propagator.hpp"
#include "tqd/pulse.hpp"
#include "tqd/rotation.hpp"
#include "tqd/scenario.hpp"
