// opssa.hpp — Umbrella header.

#pragma once

#include "campaign.hpp"
#include "core.hpp"
#include "modular.hpp"
#include "perspective.hpp"
#include "rng.hpp"
#include "states.hpp"
#include "tensor.hpp"
