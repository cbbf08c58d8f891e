//! The desk-scale group corpus used by the verification sweeps.

use crate::group::{Family, GroupSpec};

/// Cyclic groups of order up to 12, dihedral groups `D_n` for `n ≤ 8`,
/// `S3`, `S4`, `A4`, `A5`, `Q8`, the generalised quaternion group of order
/// 16, `Z2 × Z4`, `Z3 × Z3` and `S3 × Z2`.
pub fn acceptance_corpus() -> Vec<GroupSpec> {
    let mut out: Vec<GroupSpec> = (1..=12).map(|n| GroupSpec::named(Family::Cyclic(n))).collect();
    out.extend((1..=8).map(|n| GroupSpec::named(Family::Dihedral(n))));
    out.extend([
        GroupSpec::named(Family::Symmetric(3)),
        GroupSpec::named(Family::Symmetric(4)),
        GroupSpec::named(Family::Alternating(4)),
        GroupSpec::named(Family::Alternating(5)),
        GroupSpec::named(Family::Quaternion(8)),
        GroupSpec::named(Family::Quaternion(16)),
        GroupSpec::product(GroupSpec::named(Family::Cyclic(2)), GroupSpec::named(Family::Cyclic(4))),
        GroupSpec::named(Family::ElementaryAbelian { p: 3, k: 2 }),
        GroupSpec::product(
            GroupSpec::named(Family::Symmetric(3)),
            GroupSpec::named(Family::Cyclic(2)),
        ),
    ]);
    out
}
