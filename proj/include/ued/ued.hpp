#pragma once

#include "ued/algo/accounting.hpp"
#include "ued/algo/config.hpp"
#include "ued/algo/config_json.hpp"
#include "ued/algo/meta_policy.hpp"
#include "ued/algo/metrics.hpp"
#include "ued/algo/run.hpp"
#include "ued/algo/run_io.hpp"
#include "ued/algo/scoring.hpp"
#include "ued/checkpoint.hpp"
#include "ued/env.hpp"
#include "ued/eval.hpp"
#include "ued/level_sampler.hpp"
#include "ued/maze/buffer_io.hpp"
#include "ued/maze/editor.hpp"
#include "ued/maze/env.hpp"
#include "ued/maze/generate.hpp"
#include "ued/maze/level.hpp"
#include "ued/maze/render.hpp"
#include "ued/maze/shortest_path.hpp"
#include "ued/nn.hpp"
#include "ued/parallel.hpp"
#include "ued/ppo.hpp"
#include "ued/rng.hpp"
#include "ued/rollout.hpp"
