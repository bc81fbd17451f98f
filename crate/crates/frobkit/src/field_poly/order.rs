//! Monomial orders: lex, graded reverse lex, and two-block elimination orders.

use super::Monomial;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::str::FromStr;

/// A total, multiplicative monomial order with 1 as the minimum.
///
/// `Block` compares the `front` variables first under `front_order` and breaks
/// ties with the remaining variables under `back_order`; any monomial touching
/// a front variable dominates every monomial in the back variables alone,
/// which is what makes the order eliminate the front block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block {
        front: Vec<usize>,
        front_order: Box<MonomialOrder>,
        back_order: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// Elimination order with the given front block, grevlex on both sides.
    pub fn eliminating(front: Vec<usize>) -> Self {
        MonomialOrder::Block {
            front,
            front_order: Box::new(MonomialOrder::GrevLex),
            back_order: Box::new(MonomialOrder::GrevLex),
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.num_vars(), b.num_vars());
        match self {
            MonomialOrder::Lex => lex_positions(a, b, &mut (0..a.num_vars())),
            MonomialOrder::GrevLex => grevlex_positions(a, b, 0..a.num_vars()),
            MonomialOrder::Block { front, front_order, back_order } => {
                let fa = restrict(a, front);
                let fb = restrict(b, front);
                match front_order.compare(&fa, &fb) {
                    Ordering::Equal => {
                        let back: Vec<usize> =
                            (0..a.num_vars()).filter(|i| !front.contains(i)).collect();
                        back_order.compare(&restrict(a, &back), &restrict(b, &back))
                    }
                    ord => ord,
                }
            }
        }
    }
}

fn restrict(m: &Monomial, positions: &[usize]) -> Monomial {
    let exps: Vec<u64> = positions.iter().map(|&i| m.exps()[i]).collect();
    Monomial::new(exps).expect("restriction cannot overflow")
}

fn lex_positions(a: &Monomial, b: &Monomial, idx: &mut dyn Iterator<Item = usize>) -> Ordering {
    for i in idx {
        match a.exps()[i].cmp(&b.exps()[i]) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

fn grevlex_positions<I>(a: &Monomial, b: &Monomial, idx: I) -> Ordering
where
    I: IntoIterator<Item = usize>,
    I::IntoIter: DoubleEndedIterator,
{
    let positions: Vec<usize> = idx.into_iter().collect();
    let da: u64 = positions.iter().map(|&i| a.exps()[i]).sum();
    let db: u64 = positions.iter().map(|&i| b.exps()[i]).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Ties: the monomial with the smaller exponent on the *last* differing
    // variable is the larger one.
    for &i in positions.iter().rev() {
        match a.exps()[i].cmp(&b.exps()[i]) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// Public comparison with an arity check, for callers holding raw monomials.
pub fn order_compare(ord: &MonomialOrder, a: &Monomial, b: &Monomial) -> Result<Ordering> {
    if a.num_vars() != b.num_vars() {
        return Err(Error::ContextMismatch(format!(
            "comparing monomials in {} and {} variables",
            a.num_vars(),
            b.num_vars()
        )));
    }
    Ok(ord.compare(a, b))
}

impl FromStr for MonomialOrder {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "grevlex" => Ok(MonomialOrder::GrevLex),
            other => Err(format!("unknown monomial order {other:?} (use lex or grevlex)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u64]) -> Monomial {
        Monomial::new(exps.to_vec()).unwrap()
    }

    #[test]
    fn lex_three_vars() {
        let ord = MonomialOrder::Lex;
        // x > y^5 under lex with x before y
        assert_eq!(ord.compare(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[1, 2]), &m(&[1, 3])), Ordering::Less);
    }

    #[test]
    fn grevlex_classic_cases() {
        let ord = MonomialOrder::GrevLex;
        // degree first: y^5 > x
        assert_eq!(ord.compare(&m(&[0, 5]), &m(&[1, 0])), Ordering::Greater);
        // same degree: x^2*y*z > x*y^3 in (x,y,z)? deg 4 both;
        // reversed last-differing: compare z exps: 1 vs 0 -> x^2*y*z is SMALLER.
        assert_eq!(ord.compare(&m(&[2, 1, 1]), &m(&[1, 3, 0])), Ordering::Less);
        // x^2*y > x*y^2 (z exps equal, y: 1 vs 2 -> first is greater)
        assert_eq!(ord.compare(&m(&[2, 1, 0]), &m(&[1, 2, 0])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[1, 1, 1]), &m(&[1, 1, 1])), Ordering::Equal);
    }

    #[test]
    fn block_order_eliminates_front() {
        // variables (y, x); front block {0}
        let ord = MonomialOrder::eliminating(vec![0]);
        // any positive power of y beats any monomial in x alone
        assert_eq!(ord.compare(&m(&[1, 0]), &m(&[0, 9])), Ordering::Greater);
        // front ties fall through to the back block
        assert_eq!(ord.compare(&m(&[2, 1]), &m(&[2, 3])), Ordering::Less);
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = m(&[1, 0]);
        let b = m(&[1]);
        assert!(order_compare(&MonomialOrder::Lex, &a, &b).is_err());
    }
}
