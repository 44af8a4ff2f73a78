//! Concrete semilattices: the two counter representations of `T_min` and
//! the tile systems built from columns and squares.

mod example;
mod tiles;

pub use example::{example_2_13, verify_example_2_13, Example213, Example213Report};
pub use tiles::{
    factor_counts, factorization, lambda_star, section6_build, verify_l_propagation, verify_lemma_6_1,
    verify_section6_bounds, Factorization, LPropagation, Lemma61Report, Section6Bundle, Section6Config,
    Section6Row, TileUniverse, Which,
};

#[cfg(test)]
mod tests;
