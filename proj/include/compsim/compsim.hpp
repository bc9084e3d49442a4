// Copyright 2026 The compsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header.

#include "compsim/types.hpp"
#include "compsim/kinematics.hpp"
#include "compsim/floating_base.hpp"
#include "compsim/pseudo_inverse.hpp"
#include "compsim/planners.hpp"
#include "compsim/limits.hpp"
#include "compsim/frame_pipeline.hpp"
#include "compsim/motion.hpp"
#include "compsim/simulation.hpp"
#include "compsim/metrics.hpp"
#include "compsim/io.hpp"
