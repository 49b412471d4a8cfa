// Copyright 2026 The privgraph Authors
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


// Umbrella header.

#ifndef PRIVGRAPH_HPP_
#define PRIVGRAPH_HPP_

#include "privgraph/common.hpp"
#include "privgraph/dp.hpp"
#include "privgraph/eval.hpp"
#include "privgraph/experiment.hpp"
#include "privgraph/generator.hpp"
#include "privgraph/ggan.hpp"
#include "privgraph/graph.hpp"
#include "privgraph/gvae.hpp"
#include "privgraph/io.hpp"
#include "privgraph/motifs.hpp"
#include "privgraph/nn.hpp"
#include "privgraph/stats.hpp"
#include "privgraph/synthetic.hpp"
#include "privgraph/trainer.hpp"

#endif  // PRIVGRAPH_HPP_
