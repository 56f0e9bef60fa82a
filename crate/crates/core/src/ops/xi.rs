//! The linear map sending q_{i+j} d/dq_i to -((i+j)/i) q_i d/dq_{i+j} and
//! q_a q_b to -ab d^2/dq_a dq_b.

use super::operator::{DiffOperator, OpKey};
use super::poly::Alphabet;
use crate::error::{Error, Result};
use crate::exact::{int, Rational};

/// q_{i+j} d/dq_i (j >= 1).
pub fn lowering_generator(i: u32, j: u32) -> DiffOperator {
    DiffOperator::term(Alphabet::Q, int(1), 0, &[(i + j, 1)], &[i])
}

/// Multiplication by q_a q_b.
pub fn quadratic_generator(a: u32, b: u32) -> DiffOperator {
    DiffOperator::term(Alphabet::Q, int(1), 0, &[(a, 1), (b, 1)], &[])
}

pub fn xi_map(op: &DiffOperator) -> Result<DiffOperator> {
    let mut out = DiffOperator::zero(Alphabet::Q);
    for (k, c) in op.terms() {
        let outside = || Error::InvalidArgument(format!("term outside the domain of Xi: {k:?}"));
        if k.u != 0 {
            return Err(outside());
        }
        match (k.multiplier.as_slice(), k.derivs.as_slice()) {
            (&[(n, 1)], &[i]) if n > i => {
                out.add_term(OpKey::new(0, &[(i, 1)], &[n]), -c * Rational::new(n.into(), i.into()));
            }
            (&[(a, 1), (b, 1)], &[]) => {
                out.add_term(OpKey::new(0, &[], &[a, b]), -c * int((a * b) as i64));
            }
            (&[(a, 2)], &[]) => {
                out.add_term(OpKey::new(0, &[], &[a, a]), -c * int((a * a) as i64));
            }
            _ => return Err(outside()),
        }
    }
    Ok(out)
}
