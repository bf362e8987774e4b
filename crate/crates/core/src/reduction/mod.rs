//! Reduced slow dynamics: the first-order generator (Zeno Hamiltonian and
//! jumps `A_mu`), the slow-manifold correction `C1`, the second-order jumps
//! `B_mu` and the invariance residuals that check them.

mod model;
mod terms;

pub use model::{
    a_identity_residual, assemble, b_identity_residual, build_reduced_model, reduce,
    residual_order1, residual_order2, Order, ReducedModel, Reduction, Residuals,
};
pub use terms::{
    c1_operator, consolidate_jumps, dissipate, fast_pinv_weight, first_order_generator,
    first_order_jumps, k1_apply, order2_obstruction, pinv_weight, second_order_jumps,
    zeno_hamiltonian,
};
