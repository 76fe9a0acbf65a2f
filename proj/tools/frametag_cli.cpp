// Copyright 2026 The Frametag Authors.
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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frametag/frametag.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

frametag::RunOptions make_options(std::uint32_t spare_bits,
                                  std::uint32_t addr_bits,
                                  const std::string& policy,
                                  const std::string& placement,
                                  std::uint64_t seed) {
  frametag::RunOptions opt;
  opt.config = frametag::TagConfig{addr_bits, spare_bits, 16};
  opt.config.validate();
  opt.policy.on_violation =
      policy == "abort" ? frametag::MonitorPolicy::OnViolation::Abort
                        : frametag::MonitorPolicy::OnViolation::RecordAndContinue;
  opt.placement = placement == "gaps" ? frametag::Placement::RandomizedGaps
                                      : frametag::Placement::Bump;
  opt.seed = seed;
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tagged-address capability checking over simulated traces"};
  app.require_subcommand(1);

  // run
  std::string run_trace;
  std::uint32_t run_spare = 16;
  std::uint32_t run_addr_bits = 48;
  std::string run_policy = "record";
  std::string run_placement = "bump";
  std::uint64_t run_seed = 0;
  std::string run_json;
  bool run_quiet = false;
  CLI::App* cmd_run = app.add_subcommand("run", "execute a trace file");
  cmd_run->add_option("trace", run_trace, "trace file")->required();
  cmd_run->add_option("--spare-bits", run_spare, "tag bits incl. flag (16 or 8)")
      ->check(CLI::IsMember({16, 8}));
  cmd_run->add_option("--addr-bits", run_addr_bits, "significant address bits");
  cmd_run->add_option("--policy", run_policy, "abort | record")
      ->check(CLI::IsMember({"abort", "record"}));
  cmd_run->add_option("--placement", run_placement, "bump | gaps")
      ->check(CLI::IsMember({"bump", "gaps"}));
  cmd_run->add_option("--seed", run_seed, "placement seed");
  cmd_run->add_option("--json", run_json, "write the JSON report here");
  cmd_run->add_flag("--quiet", run_quiet, "suppress the text summary");

  // fuzz
  std::uint64_t fz_seed = 0;
  std::uint64_t fz_objects = 48;
  std::uint64_t fz_events = 400;
  std::string fz_sizes = "uniform:1:4096";
  std::string fz_placement = "gaps";
  std::string fz_mix;
  bool fz_no_straddlers = false;
  bool fz_no_types = false;
  std::string fz_out;
  CLI::App* cmd_fuzz =
      app.add_subcommand("fuzz", "generate a reproducible random trace");
  cmd_fuzz->add_option("--seed", fz_seed, "generator seed")->required();
  cmd_fuzz->add_option("--objects", fz_objects, "number of allocations");
  cmd_fuzz->add_option("--events", fz_events, "event statement budget");
  cmd_fuzz->add_option("--size-dist", fz_sizes,
                       "uniform:<lo>:<hi> or fixed:<n>");
  cmd_fuzz->add_option("--placement", fz_placement,
                       "bump | gaps (recorded in the trace header)")
      ->check(CLI::IsMember({"bump", "gaps"}));
  cmd_fuzz->add_option(
      "--op-mix", fz_mix,
      "weights in-bounds,oob,out-and-back,one-past-end,uaf,free,cast");
  cmd_fuzz->add_flag("--no-straddlers", fz_no_straddlers,
                     "drop the forced slot-straddling allocation");
  cmd_fuzz->add_flag("--no-types", fz_no_types, "drop typedefs and casts");
  cmd_fuzz->add_option("--out", fz_out, "output file (default stdout)");

  // study
  std::string study_sizes = "uniform:1:4096";
  std::uint64_t study_seeds = 10;
  std::uint64_t study_objects = 1000;
  std::string study_spares = "16,8";
  std::string study_out;
  CLI::App* cmd_study = app.add_subcommand(
      "study", "tag-width trade-off study over fuzzed allocations");
  cmd_study->add_option("--sizes", study_sizes, "payload size distribution");
  cmd_study->add_option("--seeds", study_seeds, "number of seeds");
  cmd_study->add_option("--objects", study_objects, "allocations per seed");
  cmd_study->add_option("--spare-bits-list", study_spares,
                        "comma list of spare-bit widths");
  cmd_study->add_option("--out", study_out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      const frametag::TraceProgram program =
          frametag::parse(read_file(run_trace));
      const frametag::RunOptions options = make_options(
          run_spare, run_addr_bits, run_policy, run_placement, run_seed);
      const frametag::RunReport report = frametag::run(program, options);
      if (!run_json.empty()) write_file(run_json, to_json_text(report));
      if (!run_quiet) std::cout << summarize(report);
      return report.clean() ? 0 : 1;
    }

    if (cmd_fuzz->parsed()) {
      frametag::FuzzParams params;
      params.n_objects = fz_objects;
      params.n_events = fz_events;
      params.size_dist = frametag::SizeDist::parse(fz_sizes);
      params.placement = fz_placement == "bump"
                             ? frametag::Placement::Bump
                             : frametag::Placement::RandomizedGaps;
      params.straddlers = !fz_no_straddlers;
      params.typed = !fz_no_types;
      if (!fz_mix.empty()) {
        std::vector<std::uint32_t> w;
        std::stringstream ss(fz_mix);
        std::string item;
        while (std::getline(ss, item, ',')) w.push_back(std::stoul(item));
        if (w.size() != 7)
          throw frametag::UsageError("--op-mix needs exactly 7 weights");
        params.mix = {w[0], w[1], w[2], w[3], w[4], w[5], w[6]};
      }
      const std::string text = frametag::fuzz_trace(fz_seed, params);
      if (fz_out.empty())
        std::cout << text;
      else
        write_file(fz_out, text);
      return 0;
    }

    if (cmd_study->parsed()) {
      frametag::StudyParams params;
      params.sizes = frametag::SizeDist::parse(study_sizes);
      params.seeds = study_seeds;
      params.objects = study_objects;
      params.spare_bits_list.clear();
      std::stringstream ss(study_spares);
      std::string item;
      while (std::getline(ss, item, ','))
        params.spare_bits_list.push_back(std::stoul(item));
      if (params.spare_bits_list.empty())
        throw frametag::UsageError("--spare-bits-list is empty");
      const std::string csv =
          frametag::study_csv(frametag::tag_width_study(params));
      if (study_out.empty())
        std::cout << csv;
      else
        write_file(study_out, csv);
      return 0;
    }
  } catch (const frametag::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const frametag::TraceError& e) {
    std::cerr << "trace error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
