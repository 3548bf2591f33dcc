#pragma once

#include "frontier/errors.hpp"
#include "frontier/gradient.hpp"
#include "frontier/model.hpp"
#include "frontier/hypotheses.hpp"
#include "frontier/grid.hpp"
#include "frontier/robin.hpp"
#include "frontier/front.hpp"
#include "frontier/parabolic.hpp"
#include "frontier/wkb.hpp"
#include "frontier/wave.hpp"
#include "frontier/experiment.hpp"
