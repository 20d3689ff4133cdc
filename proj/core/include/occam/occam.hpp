#pragma once

#include "occam/concept_variation.hpp"
#include "occam/distance.hpp"
#include "occam/error.hpp"
#include "occam/int_metric.hpp"
#include "occam/io.hpp"
#include "occam/lda.hpp"
#include "occam/npy.hpp"
#include "occam/rank_eval.hpp"
#include "occam/report_json.hpp"
#include "occam/synth.hpp"
#include "occam/types.hpp"
#include "occam/zoo.hpp"
