#pragma once

#include "fdrelay/channel.hpp"
#include "fdrelay/closed_form.hpp"
#include "fdrelay/config.hpp"
#include "fdrelay/energy.hpp"
#include "fdrelay/experiments/csv.hpp"
#include "fdrelay/experiments/scenario.hpp"
#include "fdrelay/experiments/sweeps.hpp"
#include "fdrelay/impairments.hpp"
#include "fdrelay/monte_carlo.hpp"
#include "fdrelay/relay.hpp"
#include "fdrelay/report.hpp"
#include "fdrelay/rng.hpp"
#include "fdrelay/types.hpp"
