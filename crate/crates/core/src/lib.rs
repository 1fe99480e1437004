//! Connected factorizations of complete uniform multi-hypergraphs.
//!
//! `λK_n^h` (every h-subset of an n-set, λ times) splits into edge-disjoint
//! spanning factors of degrees `r_1, …, r_k` exactly when `h | r_i·n` for
//! every `i` and `Σ r_i = λ·C(n-1, h-1)`; for `h >= 2` every factor with
//! `r_i >= 2` can be made connected. [`construct`] builds such a
//! factorization by starting from a single vertex carrying all edges as
//! loops and repeatedly detaching a new vertex, choosing which hinges move
//! with an equalized rounding over two laminar families.
//!
//! ```
//! use hyperfactor::{construct, verify_factorization, Params};
//!
//! let params = Params::new(5, 2, 1, vec![2, 2]);
//! let f = construct(&params, 0).unwrap();
//! assert!(verify_factorization(&f).overall);
//! ```

pub mod detach;
pub mod error;
pub mod flow;
pub mod format;
pub mod hypercore;
pub mod laminar;
pub mod oracle;
pub mod verify;
pub mod wings;

pub use detach::{
    check_feasibility, construct, construct_checked, initial_amalgam, split_step, CheckMode,
    Construction, Factorization, FeasibilityReport, Params,
};
pub use error::{Error, Result};
pub use hypercore::{binom, ColoredMultiHypergraph, EdgeInstance, HingeRef, VertexId};
pub use laminar::{build_family_a, build_family_b, equalized_select, LaminarFamily, Selection};
pub use oracle::{brute_force_factorize, exhaustive_select, OracleOutcome, SearchBudget};
pub use verify::{verify_factorization, verify_stage, VerificationReport};
pub use wings::{is_connected, split_is_connected, wing_decomposition, Wing, WingDecomposition};
