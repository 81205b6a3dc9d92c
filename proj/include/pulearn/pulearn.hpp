#pragma once

// Umbrella header for the whole library.

#include "pulearn/config.hpp"
#include "pulearn/csv.hpp"
#include "pulearn/dataset.hpp"
#include "pulearn/error.hpp"
#include "pulearn/gradcheck.hpp"
#include "pulearn/harness.hpp"
#include "pulearn/labeling.hpp"
#include "pulearn/losses.hpp"
#include "pulearn/matrix.hpp"
#include "pulearn/metrics.hpp"
#include "pulearn/model_io.hpp"
#include "pulearn/prior.hpp"
#include "pulearn/report.hpp"
#include "pulearn/risk.hpp"
#include "pulearn/rng.hpp"
#include "pulearn/scorer.hpp"
#include "pulearn/synth.hpp"
#include "pulearn/train.hpp"
