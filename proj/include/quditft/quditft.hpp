// Copyright 2026 The quditft Authors
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

#include "quditft/circuit.hpp"
#include "quditft/clifford_map.hpp"
#include "quditft/codes.hpp"
#include "quditft/dense.hpp"
#include "quditft/dimension.hpp"
#include "quditft/gadgets.hpp"
#include "quditft/gates.hpp"
#include "quditft/linalg_zd.hpp"
#include "quditft/pauli.hpp"
#include "quditft/runner.hpp"
#include "quditft/tableau.hpp"
#include "quditft/toffoli.hpp"
#include "quditft/verification.hpp"
