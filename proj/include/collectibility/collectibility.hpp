#pragma once

#include "collectibility/error.hpp"
#include "collectibility/golden_section.hpp"
#include "collectibility/linalg.hpp"
#include "collectibility/photonics/counts_io.hpp"
#include "collectibility/photonics/records.hpp"
#include "collectibility/photonics/reduction.hpp"
#include "collectibility/photonics/simulator.hpp"
#include "collectibility/qstate.hpp"
#include "collectibility/random_states.hpp"
#include "collectibility/witness.hpp"
