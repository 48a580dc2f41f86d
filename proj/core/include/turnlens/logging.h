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

#include <string_view>

namespace turnlens {

/// Routes library diagnostics to standard error. The level comes from the
/// TURNLENS_LOG environment variable (error, warn, info, debug; default warn).
void init_logging();

/// Overrides the level; unknown names throw InvalidArgument.
void set_log_level(std::string_view level);

}  // namespace turnlens
