//! Exact scalars and the integer/rational sequences everything else is
//! built from.

mod rational;
mod sequences;

pub use rational::{frac, int, parse_rational, rational_str, Rational};
pub use sequences::{
    b_sequence, bernoulli, bernoulli_tilde, c_sequence, c_sequence_via_b3, d_minus, double_factorial,
    double_factorial_rational, factorial, SequenceName, SequenceTable,
};
pub(crate) use sequences::for_each_composition;
