// Copyright 2026 The weaklp authors
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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weaklp/core.hpp"
#include "weaklp/embeddings.hpp"
#include "weaklp/harness.hpp"
#include "weaklp/json_io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

json read_input(const std::string& spec) {
  std::string text;
  if (spec.empty() || spec == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    text = buffer.str();
  } else if (!spec.empty() && spec.front() == '{') {
    text = spec;
  } else {
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open input file: " + spec);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text << "\n";
}

std::vector<int> parse_sizes(const std::string& csv) {
  std::vector<int> sizes;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      sizes.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw std::invalid_argument("--sizes must be comma-separated integers");
    }
    if (sizes.back() < 1) {
      throw std::invalid_argument("--sizes entries must be >= 1");
    }
  }
  if (sizes.empty()) throw std::invalid_argument("--sizes is empty");
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-truncation toolkit for weak-L^p spaces"};
  app.require_subcommand(1);

  double p = 2.0;
  int n_layout = 0;
  std::string input;
  std::string suite;
  int trials = 100;
  std::uint64_t seed = 0;
  std::string sizes_csv = "2,4,6";
  std::string format = "json";
  std::string out_path;

  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("input", input,
                    "input JSON: a path, inline text, or '-' for stdin");
    cmd->add_option("--out", out_path, "write the result to a file");
  };

  auto* cmd_norm = app.add_subcommand(
      "norm", "weak, quasi and L^{q,1} norms of an atomic vector or step");
  cmd_norm->add_option("--p", p, "exponent p (> 1)")->required();
  add_io(cmd_norm);

  auto* cmd_tk = app.add_subcommand("embed-tk",
                                    "dyadic averaging embedding of a step");
  cmd_tk->add_option("--p", p)->required();
  add_io(cmd_tk);

  auto* cmd_pk =
      app.add_subcommand("project-pk", "projection of a stack onto Y_k");
  cmd_pk->add_option("--p", p)->required();
  add_io(cmd_pk);

  auto* cmd_r = app.add_subcommand(
      "embed-r", "block embedding of a k=1 stack into a flat sequence");
  cmd_r->add_option("--p", p)->required();
  add_io(cmd_r);

  auto* cmd_w = app.add_subcommand(
      "project-w", "block-averaging projection of a flat sequence");
  cmd_w->add_option("--N", n_layout, "layout depth")->required();
  add_io(cmd_w);

  auto* cmd_verify = app.add_subcommand("verify", "run an inequality suite");
  cmd_verify->add_option("--suite", suite)->required();
  cmd_verify->add_option("--p", p);
  cmd_verify->add_option("--trials", trials);
  cmd_verify->add_option("--seed", seed);
  cmd_verify->add_option("--format", format)
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_verify->add_option("--out", out_path);

  auto* cmd_chain =
      app.add_subcommand("chain", "measured constants along the chain");
  cmd_chain->add_option("--p", p);
  cmd_chain->add_option("--sizes", sizes_csv, "comma-separated truncations");
  cmd_chain->add_option("--seed", seed);
  cmd_chain->add_option("--trials", trials);
  cmd_chain->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_norm->parsed()) {
      const auto params = weaklp::make_params(p);
      const json doc = read_input(input);
      json result;
      if (weaklp::is_atomic_json(doc)) {
        const auto f = weaklp::atomic_from_json(doc);
        result = json{{"weak", weaklp::weak_norm(f, params)},
                      {"quasi", weaklp::quasi_norm(f, params)},
                      {"lq1", weaklp::lq1_norm(f, params)}};
      } else {
        const auto f = weaklp::step_from_json(doc);
        result = json{{"weak", weaklp::weak_norm(f, params)},
                      {"quasi", weaklp::quasi_norm(f, params)},
                      {"lq1", weaklp::lq1_norm(f, params)}};
      }
      emit(result.dump(), out_path);
    } else if (cmd_tk->parsed()) {
      const auto params = weaklp::make_params(p);
      const auto f = weaklp::step_from_json(read_input(input));
      emit(weaklp::to_json(weaklp::t_embed(f, params)).dump(), out_path);
    } else if (cmd_pk->parsed()) {
      const auto params = weaklp::make_params(p);
      const auto x = weaklp::stack_from_json(read_input(input));
      emit(weaklp::to_json(weaklp::p_project(x, params)).dump(), out_path);
    } else if (cmd_r->parsed()) {
      const auto params = weaklp::make_params(p);
      const auto x = weaklp::stack_from_json(read_input(input));
      const auto layout = weaklp::build_layout(x.N);
      emit(weaklp::to_json(weaklp::r_embed(x, layout, params)).dump(),
           out_path);
    } else if (cmd_w->parsed()) {
      const auto a = weaklp::atomic_from_json(read_input(input));
      const auto layout = weaklp::build_layout(n_layout);
      emit(weaklp::to_json(weaklp::w_project(a, layout)).dump(), out_path);
    } else if (cmd_verify->parsed()) {
      weaklp::make_params(p);  // validate p before running
      weaklp::TrialConfig config;
      config.suite = suite;
      config.p_values = {p};
      config.trials = trials;
      config.seed = seed;
      const auto report = weaklp::run_suite(config);
      emit(format == "csv" ? weaklp::report_csv(report)
                           : weaklp::to_json(report).dump(),
           out_path);
      return report.pass ? kExitOk : kExitVerifyFailed;
    } else if (cmd_chain->parsed()) {
      const auto report =
          weaklp::chain_report(p, parse_sizes(sizes_csv), seed, trials);
      emit(weaklp::to_json(report).dump(), out_path);
      return report.pass ? kExitOk : kExitVerifyFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
