#pragma once

#include "klss/analytics.hpp"
#include "klss/census.hpp"
#include "klss/core.hpp"
#include "klss/enumerative.hpp"
#include "klss/ess.hpp"
#include "klss/kess.hpp"
#include "klss/nli.hpp"
#include "klss/pas.hpp"
#include "klss/setsearch.hpp"
