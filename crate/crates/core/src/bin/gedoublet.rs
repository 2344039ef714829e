// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(gedoublet::cli::main_from(std::env::args_os()));
}
