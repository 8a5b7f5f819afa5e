/*
   Copyright 2026 The kpzlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "kpzlab/chaos.hpp"
#include "kpzlab/environment.hpp"
#include "kpzlab/harness.hpp"
#include "kpzlab/io.hpp"
#include "kpzlab/moments.hpp"
#include "kpzlab/rwre_polymer.hpp"
#include "kpzlab/scaling.hpp"
#include "kpzlab/she.hpp"
#include "kpzlab/ssrw_ldp.hpp"
#include "kpzlab/stats.hpp"
