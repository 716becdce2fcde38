#pragma once

// Umbrella header for the tariff library.

#include "tariff/rational.hpp"
#include "tariff/model.hpp"
#include "tariff/transforms.hpp"
#include "tariff/lp.hpp"
#include "tariff/state.hpp"
#include "tariff/exact.hpp"
#include "tariff/fptas.hpp"
#include "tariff/single_param.hpp"
#include "tariff/instances.hpp"
#include "tariff/lottery.hpp"
