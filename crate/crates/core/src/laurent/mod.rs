//! Finite stages of an exponential polynomial ring as Laurent rings, and
//! exact ideal membership there.
//!
//! Only finitely many exponential arguments occur in any finite
//! computation. They span a free lattice; choosing a basis `a_1..a_r`
//! identifies the subring they generate with `Q[x][u_1^±1..u_r^±1]`
//! (`u_i = t^(a_i)`), where membership is decided by Gröbner bases.

mod groebner;
mod lattice;
mod membership;
mod poly;

pub use groebner::{reduce_full, Budget, GroebnerBasis, Mono, MonomialOrder, Poly};
pub use lattice::{extract_lattice, hermite_normal_form, ExponentLattice};
pub use membership::{
    buchberger, buchberger_in, eliminate_linear, evaluate_at_point, laurent_membership, replay_residual,
    x_degree, LaurentBasis, LaurentRing, MembershipOptions, MembershipVerdict,
};
pub use poly::{point, LMono, LaurentPoly};
