#pragma once

#include "lmnne/eval/complexity.h"
#include "lmnne/eval/link_prediction.h"
#include "lmnne/eval/triplet_classification.h"
