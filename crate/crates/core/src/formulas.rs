//! Closed forms, gluing identities and recurrence coefficients for
//! composition counts. All arithmetic is exact.

use std::fmt;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::{Count, SignedCoeff};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("invalid family size: {family} requires n >= {min}, got {n}")]
    InvalidFamilySize {
        family: &'static str,
        min: usize,
        n: usize,
    },
    #[error("negative intermediate value at step {step}: coefficients used outside their domain")]
    NegativeIntermediate { step: usize },
}

/// Families with a closed-form composition count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedFamily {
    /// `K_n`, counted by the Bell number.
    Complete,
    /// `C_n`, counted by `2^n - n`.
    Cycle,
    /// Any tree with `n` edges, counted by `2^n`.
    Tree,
    /// `n` isolated vertices: exactly one composition.
    Empty,
}

/// The two families whose E-tree chains and books have printed recurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeFamily {
    Complete,
    Cycle,
}

impl TreeFamily {
    pub fn name(&self) -> &'static str {
        match self {
            TreeFamily::Complete => "complete",
            TreeFamily::Cycle => "cycle",
        }
    }

    /// Composition count of one copy on `n` vertices (and of its repeated
    /// contractions, which stay in the family for `n >= 1`).
    fn copy_count(&self, n: usize) -> Count {
        match self {
            TreeFamily::Complete => bell(n),
            TreeFamily::Cycle => cycle_count(n),
        }
    }

    fn check(&self, n: usize) -> Result<(), FormulaError> {
        if n > 2 {
            Ok(())
        } else {
            Err(FormulaError::InvalidFamilySize {
                family: self.name(),
                min: 3,
                n,
            })
        }
    }
}

impl fmt::Display for TreeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coefficients of `t[r+1] = a * t[r] + b * t[r-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecurrencePair {
    pub a: SignedCoeff,
    pub b: SignedCoeff,
}

impl RecurrencePair {
    pub fn new(a: impl Into<SignedCoeff>, b: impl Into<SignedCoeff>) -> Self {
        RecurrencePair {
            a: a.into(),
            b: b.into(),
        }
    }
}

impl fmt::Display for RecurrencePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

struct BellTable {
    bells: Vec<BigUint>,
    // last row of the Bell triangle; its first entry is the last bell
    row: Vec<BigUint>,
}

static BELL_TABLE: Mutex<BellTable> = Mutex::new(BellTable {
    bells: Vec::new(),
    row: Vec::new(),
});

/// The `n`-th Bell number, from the additive Bell triangle. Rows are cached
/// across calls.
pub fn bell(n: usize) -> Count {
    let mut table = BELL_TABLE.lock().unwrap_or_else(|e| e.into_inner());
    if table.bells.is_empty() {
        table.bells.push(BigUint::one());
        table.row = vec![BigUint::one()];
    }
    while table.bells.len() <= n {
        let prev = std::mem::take(&mut table.row);
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(prev.last().expect("rows are nonempty").clone());
        for x in &prev {
            let next = row.last().expect("row starts nonempty") + x;
            row.push(next);
        }
        table.bells.push(row[0].clone());
        table.row = row;
    }
    table.bells[n].clone()
}

/// `2^n - n`, the composition count of the cycle `C_n` (`n >= 3`; the same
/// expression also counts `C_n/k` and `C_n/k/k'` for the small cases).
fn cycle_count(n: usize) -> Count {
    (BigUint::one() << n) - BigUint::from(n)
}

/// Composition count of a standard family. `Tree` takes the edge count.
pub fn closed_count(family: ClosedFamily, n: usize) -> Result<Count, FormulaError> {
    Ok(match family {
        ClosedFamily::Complete => bell(n),
        ClosedFamily::Cycle => {
            if n < 3 {
                return Err(FormulaError::InvalidFamilySize {
                    family: "cycle",
                    min: 3,
                    n,
                });
            }
            cycle_count(n)
        }
        ClosedFamily::Tree => BigUint::one() << n,
        ClosedFamily::Empty => BigUint::one(),
    })
}

/// Graphs sharing at most one vertex: counts multiply.
pub fn vertex_glue_count(c_g: &Count, c_h: &Count) -> Count {
    c_g * c_h
}

/// Disjoint graphs joined by one new edge.
pub fn bridge_count(c_g: &Count, c_h: &Count) -> Count {
    BigUint::from(2u8) * c_g * c_h
}

/// V-tree: product of the parts' counts; empty product is 1.
pub fn vtree_count(counts: &[Count]) -> Count {
    counts.iter().fold(BigUint::one(), |acc, c| acc * c)
}

/// Graphs sharing exactly one edge `(x, y)`, from the together/separated
/// counts of each side.
pub fn lemma1_count(g_plus: &Count, g_minus: &Count, h_plus: &Count, h_minus: &Count) -> Count {
    g_plus * h_plus + g_minus * h_minus
}

/// Graphs sharing exactly one edge `k`, from `C(G)`, `C(G/k)`, `C(H)`,
/// `C(H/k)`:
///
/// `C(G)C(H) + 2 C(G/k)C(H/k) - C(G)C(H/k) - C(G/k)C(H)`
///
/// which equals `(C(G) - C(G/k))(C(H) - C(H/k)) + C(G/k)C(H/k)`. A negative
/// result means the inputs are not counts of real graphs.
pub fn edge_glue_count(
    c_g: &Count,
    c_gk: &Count,
    c_h: &Count,
    c_hk: &Count,
) -> Result<Count, FormulaError> {
    let (g, gk, h, hk) = (signed(c_g), signed(c_gk), signed(c_h), signed(c_hk));
    let value = &g * &h + BigInt::from(2) * &gk * &hk - &g * &hk - &gk * &h;
    unsigned(value).ok_or(FormulaError::NegativeIntermediate { step: 0 })
}

/// Chain recurrence coefficients for E-trees of `K_n` or `C_n` where no edge
/// is shared by three copies.
pub fn chain_coeffs(family: TreeFamily, n: usize) -> Result<RecurrencePair, FormulaError> {
    family.check(n)?;
    Ok(match family {
        TreeFamily::Complete => {
            let (b0, b1, b2) = (signed(&bell(n)), signed(&bell(n - 1)), signed(&bell(n - 2)));
            RecurrencePair {
                a: &b0 - BigInt::from(2) * &b1 + BigInt::from(2) * &b2,
                b: &b1 * &b1 - &b0 * &b2,
            }
        }
        TreeFamily::Cycle => {
            let n_signed = BigInt::from(n);
            RecurrencePair {
                a: (BigInt::one() << (n - 1)) - &n_signed + 2,
                b: (n_signed - 4) * (BigInt::one() << (n - 2)) + 1,
            }
        }
    })
}

/// `t[m]` under `t[r+1] = a t[r] + b t[r-1]`.
pub fn linrec_evaluate(
    coeffs: &RecurrencePair,
    t0: &Count,
    t1: &Count,
    m: usize,
) -> Result<Count, FormulaError> {
    Ok(linrec_sequence(coeffs, t0, t1, m)?
        .pop()
        .expect("sequence has m + 1 terms"))
}

/// `[t[0], ..., t[m]]` under `t[r+1] = a t[r] + b t[r-1]`.
pub fn linrec_sequence(
    coeffs: &RecurrencePair,
    t0: &Count,
    t1: &Count,
    m: usize,
) -> Result<Vec<Count>, FormulaError> {
    let mut out = vec![t0.clone()];
    if m == 0 {
        return Ok(out);
    }
    out.push(t1.clone());
    let (mut prev, mut cur) = (signed(t0), signed(t1));
    for step in 2..=m {
        let next = &coeffs.a * &cur + &coeffs.b * &prev;
        if next.sign() == Sign::Minus {
            return Err(FormulaError::NegativeIntermediate { step });
        }
        out.push(next.magnitude().clone());
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(out)
}

/// `C(T_m)` for a book of `m` copies of `K_n` or `C_n` on one common edge.
pub fn book_count(family: TreeFamily, n: usize, m: usize) -> Result<Count, FormulaError> {
    Ok(book_sequence(family, n, m)?.pop().expect("m >= 1 terms"))
}

/// `[C(T_1), ..., C(T_m)]` for a book, iterating
/// `C(T_{r+1}) = (f(n) - f(n-1)) C(T_r) + (2 f(n-1) - f(n)) f(n-1)^r`.
pub fn book_sequence(family: TreeFamily, n: usize, m: usize) -> Result<Vec<Count>, FormulaError> {
    family.check(n)?;
    let f_n = signed(&family.copy_count(n));
    let f_n1 = signed(&family.copy_count(n - 1));
    let grow = &f_n - &f_n1;
    let correction = BigInt::from(2) * &f_n1 - &f_n;
    let mut power = f_n1.clone();
    let mut cur = f_n;
    let mut out = Vec::with_capacity(m);
    for step in 1..=m {
        if step > 1 {
            cur = &grow * &cur + &correction * &power;
            power *= &f_n1;
        }
        let value = unsigned(cur.clone()).ok_or(FormulaError::NegativeIntermediate { step })?;
        out.push(value);
    }
    Ok(out)
}

/// `[C(T_1), ..., C(T_m)]` for a chain, from `C(T_0) = 2` (the shared edge
/// alone) and `C(T_1) = f(n)`.
pub fn chain_sequence(family: TreeFamily, n: usize, m: usize) -> Result<Vec<Count>, FormulaError> {
    let coeffs = chain_coeffs(family, n)?;
    let mut seq = linrec_sequence(&coeffs, &BigUint::from(2u8), &family.copy_count(n), m)?;
    seq.remove(0);
    Ok(seq)
}

fn signed(c: &Count) -> BigInt {
    BigInt::from_biguint(Sign::Plus, c.clone())
}

fn unsigned(v: BigInt) -> Option<Count> {
    match v.sign() {
        Sign::Minus => None,
        _ if v.is_zero() => Some(BigUint::zero()),
        _ => Some(v.magnitude().clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> Count {
        BigUint::from(v)
    }

    #[test]
    fn bell_values() {
        let first: Vec<Count> = (0..=10).map(bell).collect();
        let expected = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        assert_eq!(first, expected.iter().map(|&v| c(v)).collect::<Vec<_>>());
        assert_eq!(bell(30).to_string(), "846749014511809332450147");
        // lower rows remain cached after a larger request
        assert_eq!(bell(4), c(15));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_count(ClosedFamily::Cycle, 4).unwrap(), c(12));
        assert_eq!(closed_count(ClosedFamily::Complete, 4).unwrap(), c(15));
        assert_eq!(closed_count(ClosedFamily::Tree, 3).unwrap(), c(8));
        assert_eq!(closed_count(ClosedFamily::Tree, 0).unwrap(), c(1));
        assert_eq!(closed_count(ClosedFamily::Empty, 9).unwrap(), c(1));
        assert!(closed_count(ClosedFamily::Cycle, 2).is_err());
    }

    #[test]
    fn gluing_identities() {
        assert_eq!(vertex_glue_count(&c(5), &c(5)), c(25));
        assert_eq!(vertex_glue_count(&c(1), &c(77)), c(77));
        assert_eq!(vertex_glue_count(&c(5), &c(12)), c(60));

        assert_eq!(bridge_count(&c(5), &c(5)), c(50));
        assert_eq!(bridge_count(&c(1), &c(1)), c(2));
        assert_eq!(bridge_count(&c(12), &c(1)), c(24));

        assert_eq!(vtree_count(&[c(12), c(12), c(12)]), c(1728));
        assert_eq!(vtree_count(&[]), c(1));
        assert_eq!(vtree_count(&[c(5), c(2), c(12)]), c(120));

        assert_eq!(lemma1_count(&c(2), &c(3), &c(2), &c(3)), c(13));
        assert_eq!(lemma1_count(&c(2), &c(3), &c(5), &c(7)), c(31));
        assert_eq!(lemma1_count(&c(1), &c(1), &c(1), &c(1)), c(2));

        assert_eq!(edge_glue_count(&c(5), &c(2), &c(5), &c(2)).unwrap(), c(13));
        assert_eq!(edge_glue_count(&c(5), &c(2), &c(12), &c(5)).unwrap(), c(31));
        assert_eq!(
            edge_glue_count(&c(203), &c(52), &c(2), &c(1)).unwrap(),
            c(203)
        );
        assert!(edge_glue_count(&c(1), &c(5), &c(1), &c(0)).is_err());
    }

    #[test]
    fn printed_recurrences() {
        assert_eq!(
            chain_coeffs(TreeFamily::Complete, 3).unwrap(),
            RecurrencePair::new(3, -1)
        );
        assert_eq!(
            chain_coeffs(TreeFamily::Cycle, 4).unwrap(),
            RecurrencePair::new(6, 1)
        );
        assert_eq!(
            chain_coeffs(TreeFamily::Complete, 4).unwrap(),
            RecurrencePair::new(9, -5)
        );
        assert!(chain_coeffs(TreeFamily::Cycle, 2).is_err());
        assert!(chain_coeffs(TreeFamily::Complete, 2).is_err());
    }

    #[test]
    fn cycle_coefficients_match_substitution() {
        // a = f(n) - 2f(n-1) + 2f(n-2), b = f(n-1)^2 - f(n) f(n-2), f(n) = 2^n - n
        for n in 3..40 {
            let f = |k: usize| signed(&cycle_count(k));
            let expected = RecurrencePair {
                a: f(n) - BigInt::from(2) * f(n - 1) + BigInt::from(2) * f(n - 2),
                b: f(n - 1) * f(n - 1) - f(n) * f(n - 2),
            };
            assert_eq!(
                chain_coeffs(TreeFamily::Cycle, n).unwrap(),
                expected,
                "n = {n}"
            );
        }
    }

    #[test]
    fn books() {
        assert_eq!(book_count(TreeFamily::Complete, 3, 2).unwrap(), c(13));
        assert_eq!(book_count(TreeFamily::Complete, 3, 3).unwrap(), c(35));
        assert_eq!(book_count(TreeFamily::Cycle, 4, 2).unwrap(), c(74));
        assert_eq!(book_count(TreeFamily::Cycle, 4, 1).unwrap(), c(12));
        assert!(book_count(TreeFamily::Cycle, 2, 2).is_err());
    }

    #[test]
    fn recurrence_evaluation() {
        let ladder = RecurrencePair::new(6, 1);
        assert_eq!(linrec_evaluate(&ladder, &c(2), &c(12), 3).unwrap(), c(456));
        assert_eq!(linrec_evaluate(&ladder, &c(2), &c(12), 2).unwrap(), c(74));
        assert_eq!(linrec_evaluate(&ladder, &c(9), &c(4), 1).unwrap(), c(4));
        assert_eq!(linrec_evaluate(&ladder, &c(9), &c(4), 0).unwrap(), c(9));

        let wheel = RecurrencePair::new(3, -1);
        let seq = linrec_sequence(&wheel, &c(2), &c(5), 4).unwrap();
        assert_eq!(seq, vec![c(2), c(5), c(13), c(34), c(89)]);

        assert_eq!(
            linrec_evaluate(&RecurrencePair::new(1, -5), &c(2), &c(5), 3),
            Err(FormulaError::NegativeIntermediate { step: 2 })
        );
    }

    #[test]
    fn chain_sequences() {
        assert_eq!(
            chain_sequence(TreeFamily::Cycle, 4, 3).unwrap(),
            vec![c(12), c(74), c(456)]
        );
        assert_eq!(
            chain_sequence(TreeFamily::Complete, 3, 4).unwrap(),
            vec![c(5), c(13), c(34), c(89)]
        );
        assert_eq!(
            chain_sequence(TreeFamily::Cycle, 5, 2).unwrap(),
            vec![c(27), c(369)]
        );
    }
}
