#pragma once

#include "dlatom/algebra.hpp"
#include "dlatom/commands.hpp"
#include "dlatom/config.hpp"
#include "dlatom/dynamics.hpp"
#include "dlatom/errors.hpp"
#include "dlatom/model.hpp"
#include "dlatom/observables.hpp"
