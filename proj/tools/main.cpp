// Copyright 2026 The ftmesh Authors
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

#include <iostream>

#include "commands.hpp"

namespace {

void add_physical_options(CLI::App* cmd, ftmesh::cli::PhysicalMMI& phys) {
  cmd->add_option("--refractive-index", phys.refractive_index, "MMI refractive index (sets zeta0 physically)");
  cmd->add_option("--wavenumber", phys.wavenumber, "vacuum wavenumber k0 in rad/m");
  cmd->add_option("--width", phys.width, "MMI width in m");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ftmesh::cli;

  CLI::App app{"ftmesh: compile unitaries into DFT / phase-mask programs"};
  app.set_version_flag("--version", ftmesh::kToolVersion);
  app.require_subcommand(1);

  int rc = kOk;

  CompileOptions copt;
  double ctol = 0.0;
  auto* compile = app.add_subcommand("compile", "compile a unitary matrix into a phase-mask program");
  compile->add_option("input", copt.input, "matrix text file")->required();
  compile->add_option("-o,--output", copt.output, "program JSON file")->required();
  compile->add_option("--target", copt.target, "dft or mmi")->check(CLI::IsMember({"dft", "mmi"}));
  compile->add_option("--zeta0", copt.zeta0, "MMI global phase (radians)");
  add_physical_options(compile, copt.physical);
  compile->add_flag("--project-unitary", copt.project_unitary, "replace the input by its nearest unitary");
  auto* ctol_opt = compile->add_option("--tol", ctol, "residual tolerance (default 1e-9*N)");
  compile->add_option("--unitarity-tol", copt.unitarity_tol, "max |U^H U - I| accepted");
  compile->callback([&] {
    if (ctol_opt->count() > 0) copt.tol = ctol;
    rc = cmd_compile(copt, std::cout, std::cerr);
  });

  VerifyOptions vopt;
  double vtol = 0.0;
  auto* verify = app.add_subcommand("verify", "print the reconstruction residual of a program");
  verify->add_option("program", vopt.program, "program JSON file")->required();
  verify->add_option("matrix", vopt.matrix, "matrix text file")->required();
  auto* vtol_opt = verify->add_option("--tol", vtol, "residual tolerance (default 1e-9*N)");
  verify->callback([&] {
    if (vtol_opt->count() > 0) vopt.tol = vtol;
    rc = cmd_verify(vopt, std::cout, std::cerr);
  });

  ApplyOptions aopt;
  auto* apply = app.add_subcommand("apply", "apply a program to a vector");
  apply->add_option("program", aopt.program, "program JSON file")->required();
  apply->add_option("vector", aopt.vector, "vector text file (N x 1)")->required();
  apply->add_option("-o,--output", aopt.output, "output vector file (default stdout)");
  apply->add_flag("--dense", aopt.dense, "use dense transform matrices instead of the FFT");
  apply->callback([&] { rc = cmd_apply(aopt, std::cout, std::cerr); });

  RandomOptions ropt;
  auto* random = app.add_subcommand("random", "write a Haar-random unitary");
  random->add_option("n", ropt.n, "dimension")->required();
  random->add_option("--seed", ropt.seed, "RNG seed");
  random->add_option("-o,--output", ropt.output, "matrix text file (default stdout)");
  random->callback([&] { rc = cmd_random(ropt, std::cout, std::cerr); });

  BenchOptions bopt;
  auto* bench = app.add_subcommand("bench", "time compile and apply, CSV output");
  bench->add_option("--sizes", bopt.sizes, "dimensions")->delimiter(',');
  bench->add_option("--repeats", bopt.repeats, "timing repeats (best is kept)");
  bench->add_option("-o,--output", bopt.output, "CSV file (default stdout)");
  bench->add_flag("--apply-only", bopt.apply_only, "skip compile; time random programs");
  bench->add_option("--seed", bopt.seed, "RNG seed");
  bench->callback([&] { rc = cmd_bench(bopt, std::cout, std::cerr); });

  RetargetOptions topt;
  auto* retarget = app.add_subcommand("retarget", "convert a dft program into an mmi program");
  retarget->add_option("input", topt.input, "dft program JSON file")->required();
  retarget->add_option("-o,--output", topt.output, "mmi program JSON file")->required();
  retarget->add_option("--zeta0", topt.zeta0, "MMI global phase (radians)");
  add_physical_options(retarget, topt.physical);
  retarget->add_option("--unitarity-tol", topt.unitarity_tol, "max |U^H U - I| accepted");
  retarget->callback([&] { rc = cmd_retarget(topt, std::cout, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  }
  return rc;
}
