// Copyright 2026 The bismut-flow Authors
// SPDX-License-Identifier: Apache-2.0

/// @file bismut_flow.hpp
/// @brief Umbrella header.

#pragma once

#include "bismut_flow/analysis.hpp"
#include "bismut_flow/curvature.hpp"
#include "bismut_flow/dormand_prince.hpp"
#include "bismut_flow/flow.hpp"
#include "bismut_flow/geometry_catalog.hpp"
#include "bismut_flow/invariant_forms.hpp"
#include "bismut_flow/io.hpp"
#include "bismut_flow/validation.hpp"
