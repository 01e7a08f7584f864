//! Shared fixtures for the benchmark targets.

use qcurv_core::channels::{PauliChannelSpec, PauliString};
use qcurv_core::matcore::CMatrix;
use qcurv_core::sample::{random_hermitian, rng_from_seed};

pub fn fixture_hermitian(d: usize) -> CMatrix {
    let mut rng = rng_from_seed(0xBE7C);
    random_hermitian(&mut rng, d)
}

pub fn fixture_depolarizing(p: f64) -> PauliChannelSpec {
    PauliChannelSpec::new(vec![
        (PauliString::parse("I").unwrap(), 1.0 - p),
        (PauliString::parse("X").unwrap(), p / 3.0),
        (PauliString::parse("Y").unwrap(), p / 3.0),
        (PauliString::parse("Z").unwrap(), p / 3.0),
    ])
    .unwrap()
}
