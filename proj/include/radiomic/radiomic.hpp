#pragma once

#include "radiomic/core/digest.hpp"
#include "radiomic/core/error.hpp"
#include "radiomic/core/fft.hpp"
#include "radiomic/core/filters.hpp"
#include "radiomic/core/parallel.hpp"
#include "radiomic/core/resample.hpp"
#include "radiomic/core/rng.hpp"
#include "radiomic/core/tensor_io.hpp"
#include "radiomic/core/types.hpp"
#include "radiomic/core/wav.hpp"
#include "radiomic/detect/cfar.hpp"
#include "radiomic/detect/detection.hpp"
#include "radiomic/detect/hhi.hpp"
#include "radiomic/detect/liveness.hpp"
#include "radiomic/detect/metric.hpp"
#include "radiomic/detect/outlier.hpp"
#include "radiomic/detect/roc.hpp"
#include "radiomic/metrics/llr.hpp"
#include "radiomic/metrics/report.hpp"
#include "radiomic/metrics/snr.hpp"
#include "radiomic/metrics/stoi.hpp"
#include "radiomic/recover/projection.hpp"
#include "radiomic/recover/recover.hpp"
#include "radiomic/sim/displacement.hpp"
#include "radiomic/sim/scenarios.hpp"
#include "radiomic/sim/scene.hpp"
#include "radiomic/sim/scene_json.hpp"
#include "radiomic/sim/signals.hpp"
#include "radiomic/sim/simulate.hpp"
#include "radiomic/sim/truth.hpp"
#include "radiomic/spectral/patch.hpp"
#include "radiomic/spectral/range_doppler.hpp"
#include "radiomic/spectral/stft.hpp"
#include "radiomic/synth/synth.hpp"
