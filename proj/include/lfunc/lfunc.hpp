#pragma once

#include "lfunc/errors.hpp"
#include "lfunc/ffbase.hpp"
#include "lfunc/qseries.hpp"
#include "lfunc/local_units.hpp"
#include "lfunc/tate.hpp"
#include "lfunc/satake.hpp"
#include "lfunc/repsys.hpp"
#include "lfunc/factors.hpp"
#include "lfunc/checks.hpp"
#include "lfunc/cases.hpp"
#include "lfunc/suite.hpp"
#include "lfunc/global.hpp"
