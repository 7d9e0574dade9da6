#pragma once

#include "cspt/errors.hpp"
#include "cspt/experiment.hpp"
#include "cspt/greedy_solvers.hpp"
#include "cspt/io.hpp"
#include "cspt/linalg.hpp"
#include "cspt/parallel.hpp"
#include "cspt/phase_transition.hpp"
#include "cspt/random.hpp"
#include "cspt/recovery_factors.hpp"
#include "cspt/rip_asymptotic.hpp"
#include "cspt/rip_finite.hpp"

namespace cspt {
inline constexpr const char* kVersion = "1.0.0";
}
