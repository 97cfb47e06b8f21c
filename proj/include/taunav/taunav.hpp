#pragma once

#include "taunav/banded.hpp"
#include "taunav/commands.hpp"
#include "taunav/control.hpp"
#include "taunav/csv.hpp"
#include "taunav/error.hpp"
#include "taunav/geometry.hpp"
#include "taunav/protocol.hpp"
#include "taunav/scene.hpp"
#include "taunav/sensing.hpp"
#include "taunav/sim.hpp"
#include "taunav/spline.hpp"
#include "taunav/svg.hpp"
#include "taunav/text.hpp"
#include "taunav/trajproc.hpp"
