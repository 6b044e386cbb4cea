#pragma once

#include "maxsub/core1d.hpp"
#include "maxsub/core2d.hpp"
#include "maxsub/error.hpp"
#include "maxsub/expfam.hpp"
#include "maxsub/frontier.hpp"
#include "maxsub/pgm.hpp"
#include "maxsub/rng.hpp"
#include "maxsub/simlab.hpp"
#include "maxsub/text_io.hpp"
#include "maxsub/version.hpp"
