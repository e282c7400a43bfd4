#pragma once

#include "spinrelax/units.hpp"
#include "spinrelax/quadrature.hpp"
#include "spinrelax/lineshape.hpp"
#include "spinrelax/spectral.hpp"
#include "spinrelax/evolution.hpp"
#include "spinrelax/oracle.hpp"
#include "spinrelax/run_config.hpp"
#include "spinrelax/report.hpp"
#include "spinrelax/verify.hpp"
