//! Finite categories as validated composition tables, with functors,
//! natural transformations, enumeration and the basic constructions.

mod category;
mod enumerate;
mod functor;
mod iso;
mod name;

pub use category::{Built, CategoryBuilder, FinCategory, Morphism};
pub use enumerate::{
    enumerate_functors, enumerate_nat_trans, functor_category, functor_name, FunctorCategory,
    Limits,
};
pub(crate) use enumerate::search_functors;
pub(crate) use functor::same_category;
pub use functor::{Functor, NatTrans};
pub use iso::{check_strict_inverse_pair, find_isomorphism, invert};
pub use name::{Name, Node, NIL};
