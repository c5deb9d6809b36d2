//! Fixtures shared by the criterion benches.

use std::sync::Arc;

use profinite::constructions::{builtin, sigma1_group, sigma2_group, Construction, MockTable};
use profinite::ProfinitePresentation;

/// A named builtin presentation with nothing cached yet.
pub fn fresh(name: &str) -> ProfinitePresentation {
    builtin(name).unwrap_or_else(|| panic!("unknown builtin {name}"))
}

/// The sigma1 run with five halting programs.
pub fn sigma1_fixture() -> Construction {
    let table = MockTable::new()
        .halt(0, 3, 0)
        .halt(2, 5, 1)
        .halt(4, 7, 0)
        .halt(7, 9, 0)
        .halt(11, 14, 2);
    sigma1_group(Arc::new(table))
}

/// A sigma2 run with growth stages for three indices.
pub fn sigma2_fixture() -> Construction {
    let table = MockTable::new()
        .wsize(0, 1, 1)
        .wsize(0, 2, 2)
        .wsize(0, 4, 3)
        .wsize(1, 1, 1)
        .wsize(1, 3, 2)
        .wsize(2, 1, 1)
        .wsize(2, 3, 2);
    sigma2_group(Arc::new(table))
}
