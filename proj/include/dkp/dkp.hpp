#pragma once

#include "dkp/bound_states.hpp"
#include "dkp/cli.hpp"
#include "dkp/errors.hpp"
#include "dkp/model.hpp"
#include "dkp/oracle.hpp"
#include "dkp/scattering.hpp"
#include "dkp/special_functions.hpp"
