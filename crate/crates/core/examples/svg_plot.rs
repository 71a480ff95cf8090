//! Writes SVG plots of psi for phi and sqrt(2) into a directory.

use std::path::PathBuf;

use irrmeasure::cf::ContinuedFraction;
use irrmeasure::perm::{AnalysisConfig, Member, TupleContext};
use irrmeasure::plot::{plot_files, PlotOptions};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "plots".into()));
    let members = vec![
        Member::from_cf("phi", ContinuedFraction::periodic(1, &[], &[1]).unwrap()),
        Member::from_cf("sqrt2", ContinuedFraction::periodic(1, &[], &[2]).unwrap()),
    ];
    let config = AnalysisConfig {
        t_max: 10_000,
        burn_in: Some(100),
        ..AnalysisConfig::default()
    };
    let ctx = TupleContext::new(members, &config).unwrap();
    std::fs::create_dir_all(&dir).unwrap();
    for (name, svg) in plot_files(&ctx, PlotOptions::default()) {
        let path = dir.join(name);
        std::fs::write(&path, svg).unwrap();
        println!("{}", path.display());
    }
}
