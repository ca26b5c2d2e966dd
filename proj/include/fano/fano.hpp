// Copyright 2026 The fanolines Authors
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

#ifndef FANO_FANO_HPP
#define FANO_FANO_HPP

#include "fano/types.hpp"
#include "fano/superop.hpp"
#include "fano/lineshape.hpp"
#include "fano/scattering.hpp"
#include "fano/liouville_effective.hpp"
#include "fano/general_model.hpp"
#include "fano/oracle.hpp"
#include "fano/csv.hpp"
#include "fano/config.hpp"

#endif  // FANO_FANO_HPP
