#pragma once

#include "exclusion/errors.hpp"
#include "exclusion/evolution.hpp"
#include "exclusion/generator.hpp"
#include "exclusion/grid.hpp"
#include "exclusion/mixing.hpp"
#include "exclusion/report.hpp"
#include "exclusion/serialization.hpp"
#include "exclusion/spectral.hpp"
#include "exclusion/state_index.hpp"
#include "exclusion/verify.hpp"
