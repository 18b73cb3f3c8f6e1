// emocurate/emocurate.hpp
//
// Umbrella header.

#pragma once

#include "emocurate/annotation.hpp"
#include "emocurate/annotator_sim.hpp"
#include "emocurate/consistency.hpp"
#include "emocurate/dataset_stats.hpp"
#include "emocurate/error.hpp"
#include "emocurate/io.hpp"
#include "emocurate/label_policy.hpp"
#include "emocurate/output_format.hpp"
#include "emocurate/pipeline.hpp"
#include "emocurate/reliability_em.hpp"
#include "emocurate/taxonomy.hpp"
