//! Jet-bundle coordinate calculus over the composite bundle `Y → Θ → X`.

mod forms;
mod multi_index;
mod space;
mod total;

pub use forms::{DifferentialForm, VectorField};
pub use multi_index::{Direction, MultiIndex};
pub use space::{JetError, JetSpace};
pub use total::{contact_decompose, euler_lagrange, prolong, ContactSplit, Prolongation};
