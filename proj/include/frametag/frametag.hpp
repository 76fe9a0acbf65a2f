// Copyright 2026 The Frametag Authors.
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

#ifndef FRAMETAG_FRAMETAG_HPP_
#define FRAMETAG_FRAMETAG_HPP_

#include "frametag/errors.hpp"
#include "frametag/frame_algebra.hpp"
#include "frametag/fuzz.hpp"
#include "frametag/monitor.hpp"
#include "frametag/oracle.hpp"
#include "frametag/report.hpp"
#include "frametag/shadow_table.hpp"
#include "frametag/sim_heap.hpp"
#include "frametag/study.hpp"
#include "frametag/tag_config.hpp"
#include "frametag/trace.hpp"
#include "frametag/type_registry.hpp"
#include "frametag/verdict.hpp"
#include "frametag/vm.hpp"

#endif  // FRAMETAG_FRAMETAG_HPP_
