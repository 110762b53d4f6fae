#pragma once

#include "adhocnet/agent.hpp"
#include "adhocnet/config.hpp"
#include "adhocnet/config_io.hpp"
#include "adhocnet/engine.hpp"
#include "adhocnet/errors.hpp"
#include "adhocnet/metrics.hpp"
#include "adhocnet/net_model.hpp"
#include "adhocnet/qnet.hpp"
#include "adhocnet/rng.hpp"
#include "adhocnet/trace_io.hpp"
