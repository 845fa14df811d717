#pragma once

#include "wseg/ccl.hpp"
#include "wseg/config.hpp"
#include "wseg/edt.hpp"
#include "wseg/eval.hpp"
#include "wseg/parallel.hpp"
#include "wseg/pipeline.hpp"
#include "wseg/postproc.hpp"
#include "wseg/preprocess.hpp"
#include "wseg/raster.hpp"
#include "wseg/segmenter.hpp"
#include "wseg/synth.hpp"
