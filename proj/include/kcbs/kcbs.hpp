#pragma once

#include "kcbs/compass.hpp"
#include "kcbs/errors.hpp"
#include "kcbs/lhv.hpp"
#include "kcbs/optimizer.hpp"
#include "kcbs/pentagram.hpp"
#include "kcbs/photon_sim.hpp"
#include "kcbs/pipeline.hpp"
#include "kcbs/qutrit.hpp"
#include "kcbs/report.hpp"
#include "kcbs/rng.hpp"
#include "kcbs/serialize.hpp"
