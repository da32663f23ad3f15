//! Writes the curve data for all five figures into `figures/`, in both the
//! published and the exact flavour.

use std::path::Path;

use collective_decay::harness::figures::{cmd_figures, FigureMode, FigureOptions};

fn main() {
    let opts = FigureOptions::default();
    for (mode, dir) in [
        (FigureMode::Printed, "figures/printed"),
        (FigureMode::Oracle, "figures/oracle"),
    ] {
        match cmd_figures(&[1, 2, 3, 4, 5], mode, &opts, Path::new(dir)) {
            Ok(files) => println!("{dir}: {} curves", files.len()),
            Err(e) => {
                eprintln!("{e}");
                std::process::exit(e.exit_code());
            }
        }
    }
}
