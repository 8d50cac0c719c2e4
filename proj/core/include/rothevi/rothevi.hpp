#pragma once

#include "rothevi/constants.hpp"
#include "rothevi/convection.hpp"
#include "rothevi/diagnostics.hpp"
#include "rothevi/functional.hpp"
#include "rothevi/gelfand.hpp"
#include "rothevi/load.hpp"
#include "rothevi/oseen.hpp"
#include "rothevi/problems.hpp"
#include "rothevi/rothe.hpp"
#include "rothevi/types.hpp"
