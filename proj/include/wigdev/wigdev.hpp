#pragma once

#include "errors.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "interp.hpp"
#include "wigner.hpp"
#include "states.hpp"
#include "starcalc.hpp"
#include "schrod1d.hpp"
#include "projection.hpp"
#include "profiles.hpp"
#include "dynamics.hpp"
#include "approx.hpp"
#include "config.hpp"
#include "io.hpp"
