// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include <iostream>

#include "marshal/cli.hpp"

int main(int argc, char** argv) { return marshal::run_cli(argc, argv, std::cout, std::cerr); }
