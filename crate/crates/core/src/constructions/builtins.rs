use crate::perm::Permutation;
use crate::presentation::ProfinitePresentation;

use super::{cyclic_product, two_adic};

/// Names accepted by [`builtin`].
pub const BUILTINS: &[&str] = &["trivial", "cp2", "cp23", "cp235", "s3", "two_adic", "klein_diag"];

/// Small named presentations for demos and test suites.
///
/// `cp2`, `cp23` repeat their orders forever; `cp235` is `C2 × C3 × C5`
/// followed by fixed points; `s3` is `Sym(3)` on block 0; `klein_diag` is
/// the diagonal involution `(0 1)(2 3)` on two linked blocks.
pub fn builtin(name: &str) -> Option<ProfinitePresentation> {
    let cp = |orders: &[usize], repeat| cyclic_product(orders, repeat).expect("positive orders");
    let finite = |support, gens: &[&str]| {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|g| Permutation::from_cycles(support, g).expect("valid cycles"))
            .collect();
        ProfinitePresentation::from_finite_group(support, &gens).expect("closed generators")
    };
    Some(match name {
        "trivial" => ProfinitePresentation::trivial(),
        "cp2" => cp(&[2], true),
        "cp23" => cp(&[2, 3], true),
        "cp235" => cp(&[2, 3, 5], false),
        "s3" => finite(3, &["(0 1)", "(0 1 2)"]),
        "two_adic" => two_adic(),
        "klein_diag" => finite(4, &["(0 1)(2 3)"]),
        _ => return None,
    })
}
