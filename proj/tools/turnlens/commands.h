// Copyright (c) 2026 The TurnLens Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "CLI11.hpp"

namespace turnlens::cli {

// Each register_* adds one subcommand to the app; the callback runs the
// command and throws turnlens errors on failure.
void register_segment(CLI::App& app);
void register_tt(CLI::App& app);
void register_select(CLI::App& app);
void register_pool(CLI::App& app);
void register_concat(CLI::App& app);
void register_train(CLI::App& app);
void register_eval(CLI::App& app);
void register_experiment(CLI::App& app);
void register_synth(CLI::App& app);

}  // namespace turnlens::cli
