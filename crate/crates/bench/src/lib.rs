//! Shared workloads for the benches.

use frobx_core::examples::{nilcoxeter_fixture, symmetric_fixture, Fixture};

/// Extensions timed by the pipeline bench, smallest first.
pub fn extensions() -> Vec<Fixture> {
    let mut out: Vec<Fixture> = [(1, 2), (2, 3), (1, 3), (3, 4)]
        .into_iter()
        .map(|(m, n)| nilcoxeter_fixture(m, n).expect("within caps"))
        .collect();
    out.push(symmetric_fixture(2, 3).expect("within caps"));
    out
}
