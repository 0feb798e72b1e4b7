// Copyright 2026 The spssvs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spssvs/config.h"
#include "spssvs/moments.h"

namespace spssvs {

struct FigureFile {
    std::string name;
    std::string content;
};

/// fig1a fig1b fig1c fig2 fig3 fig4a fig4b fig5.
const std::vector<std::string> &figure_ids();

struct FigureOptions {
    /// Wigner panels only. Unset means closed form for r > 0 and the oracle
    /// for the r = 0 row.
    std::optional<Backend> wigner_backend;
};

/// Curve files for one preset. The preset's fixed parameters override the matching
/// fields of base; sigma, N and truncation come from base. Throws
/// InvalidArgument for an unknown id.
std::vector<FigureFile> build_figure(const std::string &id, const MeasurementConfig &base,
                                     const FigureOptions &options = {});

}  // namespace spssvs
