//! Exact spectra of normal Cayley digraphs.
//!
//! For a finite group `G` and a connection set `C` that is a union of
//! conjugacy classes, the eigenvalues of `Cay(G, C)` are read off the
//! character table of `G`. This crate computes that table exactly (values in
//! `Z[η_m]`, `m` the exponent of `G`), decides when all eigenvalues lie in a
//! given subfield of `Q(η_m)` or in `Z`, and checks those decisions against
//! purely group-theoretic criteria and a brute-force adjacency-matrix oracle.
//!
//! ```
//! use cayley_spectra::prelude::*;
//!
//! let g = Group::build(&GroupSpec::parse("symmetric(3)").unwrap()).unwrap();
//! let cd = conjugacy_classes(&g);
//! let ct = character_table(&g, &cd).unwrap();
//! let transpositions = (0..cd.num_classes()).find(|&j| cd.class_size(j) == 3).unwrap();
//! let c = ConnectionSet::from_classes(&cd, &[transpositions]).unwrap();
//! let report = check_theorem1(&g, &cd, &c, &ct).unwrap();
//! assert!(report.integral && report.power_closed);
//! ```

#![allow(clippy::needless_range_loop)]

pub mod characters;
pub mod corpus;
pub mod cyclotomic;
pub mod galois;
pub mod group;
pub mod job;
mod modp;
pub mod oracle;
pub mod spectra;

pub mod prelude {
    pub use crate::characters::{
        character_table, class_matrices, decompose, dixon_character_table, induced_character_from_cyclic,
        verify_galois_character_identity, CharacterTable, ClassMatrices, InducedCharacter,
    };
    pub use crate::cyclotomic::{cyclotomic_polynomial, CycContext, CycInt};
    pub use crate::galois::{
        all_subgroups, check_lemma1, cyclic_subgroups, gamma_conjugacy_classes, is_power_closed, power_closure,
        subgroup_closure, trivial_subgroup, unit_group, GaloisSubgroup, GammaClassification,
    };
    pub use crate::group::{conjugacy_classes, ClassData, Family, Group, GroupSpec};
    pub use crate::oracle::{
        adjacency_matrix, compare_spectra, oracle_power_closed, oracle_spectrum, AdjacencyMatrix, Backend,
        OracleSpectrum,
    };
    pub use crate::spectra::{
        all_eigenvalues_in_k, all_eigenvalues_integral, check_coefficient_symmetry, check_theorem1, check_theorem2,
        eigenvalues_via_characters, make_connection_set, nonidentity_class_subsets, theta_coefficients, ConnectionSet,
        ConnectionSpec, Eigenvalue, Spectrum,
    };
}
