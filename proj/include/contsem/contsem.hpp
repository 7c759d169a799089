// Copyright 2026 The contsem Authors.
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

#ifndef CONTSEM_CONTSEM_HPP
#define CONTSEM_CONTSEM_HPP

#include "contsem/check.hpp"
#include "contsem/corpus.hpp"
#include "contsem/derive.hpp"
#include "contsem/error.hpp"
#include "contsem/lexicon.hpp"
#include "contsem/render.hpp"
#include "contsem/rules.hpp"
#include "contsem/term.hpp"
#include "contsem/type.hpp"

#endif  // CONTSEM_CONTSEM_HPP
