#pragma once

#include "dbox/channels.hpp"
#include "dbox/config.hpp"
#include "dbox/discretization.hpp"
#include "dbox/errors.hpp"
#include "dbox/io.hpp"
#include "dbox/kernel.hpp"
#include "dbox/nystrom.hpp"
#include "dbox/observables.hpp"
#include "dbox/oracle.hpp"
#include "dbox/svg.hpp"
#include "dbox/sweep.hpp"
#include "dbox/version.hpp"
