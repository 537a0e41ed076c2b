// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the whole library.
#pragma once

#include "desws/detection.hpp"
#include "desws/distance.hpp"
#include "desws/errors.hpp"
#include "desws/evaluation.hpp"
#include "desws/geometry.hpp"
#include "desws/ingestion.hpp"
#include "desws/rank_tests.hpp"
#include "desws/rng.hpp"
#include "desws/se_block.hpp"
#include "desws/simulator.hpp"
#include "desws/warning.hpp"
