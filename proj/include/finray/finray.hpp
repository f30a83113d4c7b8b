//  Copyright 2026 The finray Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

#include "finray/color.hpp"
#include "finray/components.hpp"
#include "finray/config.hpp"
#include "finray/dotref.hpp"
#include "finray/error.hpp"
#include "finray/filters.hpp"
#include "finray/image.hpp"
#include "finray/library_io.hpp"
#include "finray/markers.hpp"
#include "finray/morphology.hpp"
#include "finray/orientation.hpp"
#include "finray/placement.hpp"
#include "finray/pnm.hpp"
#include "finray/poisson.hpp"
#include "finray/reconstruct.hpp"
#include "finray/serialize.hpp"
#include "finray/sim_port.hpp"
#include "finray/simsensor.hpp"
