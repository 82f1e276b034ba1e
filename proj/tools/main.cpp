// abscat: Aharonov-Bohm scattering off a magnetic vortex in conical space.
// SPDX-License-Identifier: Apache-2.0
#include "abscat/cli.hpp"

int main(int argc, char** argv) { return abscat::cli_main(argc, argv); }
