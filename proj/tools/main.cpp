// Copyright 2026 The corrsep Authors
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

#include <iostream>

#include "cli_support.hpp"
#include "commands.hpp"
#include "corrsep/error.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrsep: separation and imputation of localized attribute corruptions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "corrsep 0.1.0");
  app.option_defaults()->always_capture_default();
  app.failure_message(CLI::FailureMessage::help);
  const auto commands = corrsep::cli::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  for (const auto& command : commands) {
    if (!command.sub->parsed()) continue;
    try {
      command.run();
      return 0;
    } catch (const corrsep::cli::UsageError& e) {
      std::cerr << "error: " << e.what() << "\n\n" << command.sub->help();
      return kExitUsage;
    } catch (const corrsep::ParameterError& e) {
      std::cerr << "error: invalid parameter " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitData;
    }
  }
  return kExitUsage;
}
