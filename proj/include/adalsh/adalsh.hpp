// Copyright 2026 The adalsh Authors
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

#include "adalsh/analysis.hpp"
#include "adalsh/bench.hpp"
#include "adalsh/collision.hpp"
#include "adalsh/combinatorics.hpp"
#include "adalsh/error.hpp"
#include "adalsh/generators.hpp"
#include "adalsh/hamming.hpp"
#include "adalsh/index.hpp"
#include "adalsh/instance_io.hpp"
#include "adalsh/probing.hpp"
#include "adalsh/query.hpp"
#include "adalsh/rng.hpp"
