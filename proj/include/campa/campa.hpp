/*
 * Copyright (c) 2026, the campa authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef CAMPA_CAMPA_HPP_
#define CAMPA_CAMPA_HPP_

#include "campa/algebra.hpp"
#include "campa/builders.hpp"
#include "campa/core.hpp"
#include "campa/cost.hpp"
#include "campa/deployment.hpp"
#include "campa/json_io.hpp"
#include "campa/latency.hpp"
#include "campa/optimizer.hpp"
#include "campa/parser.hpp"
#include "campa/printer.hpp"
#include "campa/projection.hpp"
#include "campa/prng.hpp"
#include "campa/rational.hpp"
#include "campa/semantics.hpp"
#include "campa/simplex.hpp"
#include "campa/spline.hpp"
#include "campa/unroll.hpp"

#endif  // CAMPA_CAMPA_HPP_
