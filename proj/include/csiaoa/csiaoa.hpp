// SPDX-License-Identifier: Apache-2.0
//
// csiaoa: joint angle-of-arrival spectrum toolkit for WiFi CSI sensing
// Copyright (C) 2026 The csiaoa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CSIAOA_CSIAOA_HPP
#define CSIAOA_CSIAOA_HPP

#include "ablation.hpp"
#include "binary_io.hpp"
#include "calibration.hpp"
#include "environment.hpp"
#include "errors.hpp"
#include "fusion.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "random.hpp"
#include "scenario_json.hpp"
#include "spectrum.hpp"
#include "steering.hpp"
#include "synthesizer.hpp"
#include "trace_io.hpp"

#endif
