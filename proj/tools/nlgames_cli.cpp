// Copyright 2026 The nlgames Authors
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


#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "nlgames/cli.hpp"

namespace {

struct Flags {
  std::vector<std::string> configs;
  std::vector<std::string> sets;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;
  std::string mode;
};

int run(const std::string& name, const Flags& f) {
  using namespace nlgames;
  cli::Context ctx;
  for (const auto& path : f.configs) ctx.config.merge(Config::from_file(path));
  if (!f.mode.empty()) ctx.config.set("mode=" + f.mode);
  for (const auto& s : f.sets) ctx.config.set(s);
  ctx.seed = f.seed;
  ctx.workers = f.workers;

  const auto res = cli::run_command(name, ctx);
  const Manifest man{ctx.seed, ctx.config.hash(), name};
  if (f.out.empty()) {
    write_csv(std::cout, res.table, man);
  } else {
    std::ofstream os(f.out);
    if (!os) throw ConfigError(f.out + ": cannot open output file");
    write_csv(os, res.table, man);
    for (const auto& [suffix, content] : res.attachments) {
      std::ofstream extra(f.out + suffix);
      extra << content;
    }
  }
  if (!res.summary.empty()) std::cerr << res.summary << (res.summary.back() == '\n' ? "" : "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal game simulations and threshold solvers"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  for (const auto& name : nlgames::cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.configs, "YAML file of key: value pairs (repeatable, later wins)");
    sub->add_option("--set", flags.sets, "override one key, key=value (repeatable)");
    sub->add_option("--seed", flags.seed, "RNG seed");
    sub->add_option("--workers", flags.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "CSV output path (stdout if absent)");
    if (name == "threshold") sub->add_option("--mode", flags.mode, "finite, asymptotic, three-bit, pbit-alpha, convention");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return run(chosen, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nlgames::cli::exit_code_for(e);
  }
}
