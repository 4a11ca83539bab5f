// Copyright 2026 The anticoloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Everything in one include.

#pragma once

#include "anticoloc/config_cache.hpp"
#include "anticoloc/configs.hpp"
#include "anticoloc/error.hpp"
#include "anticoloc/feasibility.hpp"
#include "anticoloc/heuristic.hpp"
#include "anticoloc/io.hpp"
#include "anticoloc/mip/formulations.hpp"
#include "anticoloc/mip/linear_model.hpp"
#include "anticoloc/mip/mps.hpp"
#include "anticoloc/model.hpp"
#include "anticoloc/pipeline.hpp"
#include "anticoloc/rng.hpp"
#include "anticoloc/solution.hpp"
#include "anticoloc/solver/brute_force.hpp"
#include "anticoloc/solver/lp.hpp"
#include "anticoloc/solver/mip.hpp"
#include "anticoloc/solver/mps_reader.hpp"
