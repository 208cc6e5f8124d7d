//! Print the N=5 phase map over g in [0.01, 1.5], lambda in [0.1, 2.5] as
//! CSV on stdout, with a small label summary on stderr.

use rg_flow::{
    grid_thresholds, linspace, raster, BareOptions, FlowParams, DEFAULT_LOWER,
    DEFAULT_UPPER_FACTOR,
};

fn main() {
    let n = 5;
    let gs = linspace(0.01, 1.5, 40);
    let lambdas = linspace(0.1, 2.5, 40);
    let thresholds = grid_thresholds(
        n,
        &gs,
        &lambdas,
        &BareOptions::default(),
        DEFAULT_LOWER,
        DEFAULT_UPPER_FACTOR,
    )
    .expect("grid thresholds");
    let map = raster(n, &gs, &lambdas, &thresholds, &FlowParams::default()).expect("raster");
    print!("{}", map.to_csv());
    for (label, count) in map.label_counts() {
        eprintln!("{label:>24}: {count}");
    }
}
