// Copyright 2026 The nlifoundry Authors.
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

// Everything except the HTTP server, which pulls in cpp-httplib.

#pragma once

#include "nlifoundry/core/error.hpp"
#include "nlifoundry/core/relation.hpp"
#include "nlifoundry/core/text.hpp"
#include "nlifoundry/core/hash.hpp"
#include "nlifoundry/core/jsonl.hpp"
#include "nlifoundry/core/manifest.hpp"
#include "nlifoundry/ingest/normalize.hpp"
#include "nlifoundry/ingest/dump_reader.hpp"
#include "nlifoundry/ingest/page_filter.hpp"
#include "nlifoundry/ingest/wikitext.hpp"
#include "nlifoundry/ingest/sentences.hpp"
#include "nlifoundry/ingest/pipeline.hpp"
#include "nlifoundry/labeler/phrase_table.hpp"
#include "nlifoundry/labeler/labeled_pair.hpp"
#include "nlifoundry/labeler/labeler.hpp"
#include "nlifoundry/corpus/corpus.hpp"
#include "nlifoundry/corpus/stats.hpp"
#include "nlifoundry/annotate/agreement.hpp"
#include "nlifoundry/annotate/campaign.hpp"
#include "nlifoundry/cartography/cartography.hpp"
#include "nlifoundry/curriculum/difficulty.hpp"
#include "nlifoundry/curriculum/schedule.hpp"
#include "nlifoundry/curriculum/scores.hpp"
#include "nlifoundry/trainer/embeddings.hpp"
#include "nlifoundry/trainer/features.hpp"
#include "nlifoundry/trainer/model.hpp"
#include "nlifoundry/trainer/train.hpp"
#include "nlifoundry/eval/metrics.hpp"
#include "nlifoundry/eval/significance.hpp"
