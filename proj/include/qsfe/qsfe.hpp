// Copyright 2026 The qsfe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header. The scenario layer additionally needs nlohmann/json on the
// include path.

#include "qsfe/version.hpp"
#include "qsfe/numerics.hpp"
#include "qsfe/chi.hpp"
#include "qsfe/states.hpp"
#include "qsfe/measurements.hpp"
#include "qsfe/verifiers.hpp"
#include "qsfe/estimation.hpp"
#include "qsfe/random.hpp"
#include "qsfe/selfcheck.hpp"
#include "qsfe/scenario.hpp"
