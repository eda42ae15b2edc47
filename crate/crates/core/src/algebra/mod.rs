//! Finite n-ary semigroups: tables, words, powers and subuniverses.

mod power;
mod sub;
mod table;
mod word;

pub use power::{compute_exponent, element_power, power_profile, PowerCache, PowerProfile};
pub use sub::{
    enumerate_subuniverses, enumerate_subuniverses_capped, is_closed, Subuniverse,
    DEFAULT_MAX_SCAN_SIZE,
};
pub use table::{Elem, NaryTable};
pub use word::{eval_product, eval_word, is_valid_length, Word};

pub(crate) use table::{checked_pow, for_each_tuple, for_each_tuple_until};
pub(crate) use word::eval_letters_unchecked;

/// Whether `table` is associative. Free-function form of [`NaryTable::is_associative`].
pub fn is_associative(table: &NaryTable) -> bool {
    table.is_associative()
}

pub fn is_commutative(table: &NaryTable) -> bool {
    table.is_commutative()
}

pub fn is_idempotent(table: &NaryTable) -> bool {
    table.is_idempotent()
}
