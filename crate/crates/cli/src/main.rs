// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use clap::Parser;
use ddme_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
