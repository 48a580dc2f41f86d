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

#include <cstdio>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "turnlens/error.h"
#include "turnlens/logging.h"
#include "turnlens/version.h"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  turnlens::init_logging();

  CLI::App app{"turnlens: turn-taking features and linear classifiers for call-centre conversations"};
  app.set_version_flag("--version", std::string(turnlens::kVersion));
  app.require_subcommand(1);
  app.fallthrough(false);

  namespace cli = turnlens::cli;
  cli::register_segment(app);
  cli::register_tt(app);
  cli::register_select(app);
  cli::register_pool(app);
  cli::register_concat(app);
  cli::register_train(app);
  cli::register_eval(app);
  cli::register_experiment(app);
  cli::register_synth(app);

  if (argc > 1 && argv[1][0] != '-' && app.get_subcommand_no_throw(argv[1]) == nullptr) {
    std::fprintf(stderr, "turnlens: unknown subcommand '%s'\n\n%s", argv[1], app.help().c_str());
    return kUsage;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsage;
  } catch (const turnlens::DataError& e) {
    std::fprintf(stderr, "turnlens: data error: %s\n", e.what());
    return kData;
  } catch (const turnlens::InvalidArgument& e) {
    // Library contract violations here come from input contents (single-class
    // labels, bad profile rows), not from the command line itself.
    std::fprintf(stderr, "turnlens: invalid input: %s\n", e.what());
    return kData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "turnlens: %s\n", e.what());
    return kRuntime;
  }
  return kOk;
}
