// Copyright 2026 The rusarith Authors
//
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

#pragma once

#include "rusarith/angles.hpp"
#include "rusarith/costs.hpp"
#include "rusarith/expr.hpp"
#include "rusarith/reciprocal.hpp"
#include "rusarith/reproduce.hpp"
#include "rusarith/rng.hpp"
#include "rusarith/rus.hpp"
#include "rusarith/series.hpp"
#include "rusarith/square_wave.hpp"
#include "rusarith/statevector.hpp"
#include "rusarith/synth.hpp"
