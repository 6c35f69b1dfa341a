//! Iterated Cox rings of platonic rings.
//!
//! One step passes from `R(A, P0)` to the Cox ring of its spectrum: the
//! blocks are duplicated according to the component counts of the zero sets
//! of the variables and the new exponents are the isotropy orders, read off a
//! matrix whose rows generate the saturated row lattice of `P0`.

use num_integer::Integer;
use num_traits::One;
use serde_json::{json, Value};

use crate::data::{block_order, normalize_exponents, DefiningData, ExponentData, Normal, Variant};
use crate::error::{Error, Result};
use crate::invariants::{component_count, is_factorial, is_platonic_ring};
use crate::linalg::{gcd_all, Int, IntMatrix};

/// Exponent data of the Cox ring of the variety given by `data`.
pub fn cox_exponents(data: &DefiningData) -> ExponentData {
    data.exponents.clone()
}

/// Sort every block descending and the blocks lexicographically descending,
/// keeping redundant blocks. Returns the data and the block permutation
/// (`perm[k]` is the old index of the new block `k`).
pub fn order_exponents(e: &ExponentData) -> (ExponentData, Vec<usize>) {
    let blocks: Vec<Vec<Int>> = e
        .blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_by(|x, y| y.cmp(x));
            b
        })
        .collect();
    let mut perm: Vec<usize> = (0..blocks.len()).collect();
    perm.sort_by(|&x, &y| block_order(&blocks[x], &blocks[y]));
    let blocks = perm.iter().map(|&k| blocks[k].clone()).collect();
    (ExponentData { variant: e.variant, blocks, m: e.m }, perm)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationStep {
    pub input: ExponentData,
    /// `block_permutation[k]` is the input index of block `k` of `ordered`.
    pub block_permutation: Vec<usize>,
    /// The input after ordering and the swap among the first three blocks.
    pub ordered: ExponentData,
    /// Component counts per block of `ordered`.
    pub c: Vec<Int>,
    pub p1: IntMatrix,
    pub raw_output: ExponentData,
    pub normalized_output: Normal<ExponentData>,
}

impl IterationStep {
    pub fn to_json(&self) -> Value {
        json!({
            "input": self.input.to_json(),
            "block_permutation": self.block_permutation,
            "component_counts": self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "raw_output": self.raw_output.to_json(),
            "normalized_output": self.normalized_output.to_json(),
        })
    }
}

fn require_platonic_non_factorial(e: &ExponentData) -> Result<()> {
    if e.variant != Variant::Two {
        return Err(Error::pre("iteration needs variant 2 exponent data"));
    }
    if !e.validate().is_empty() {
        return Err(Error::Invalid(e.validate()));
    }
    if !is_platonic_ring(e)? {
        return Err(Error::pre(format!("{e} is not platonic")));
    }
    if is_factorial(e) {
        return Err(Error::pre(format!("{e} is factorial")));
    }
    Ok(())
}

/// The matrix whose rows generate the saturation of the row lattice of
/// `P0`. Needs ordered platonic data with `gcd(g1, g2) = gcd(g0, g1, g2)`.
pub fn saturated_rows(e: &ExponentData) -> IntMatrix {
    let g = e.block_gcds();
    let r = e.r();
    let offsets = e.offsets();
    let mut p1 = IntMatrix::zeros(r, e.n() + e.m);
    for row in 0..r {
        let i = row + 1;
        let div = if i <= 2 { g[0].gcd(&g[i]) } else { Int::one() };
        for (j, l) in e.blocks[0].iter().enumerate() {
            p1[(row, offsets[0] + j)] = -(l / &div);
        }
        for (j, l) in e.blocks[i].iter().enumerate() {
            p1[(row, offsets[i] + j)] = l / &div;
        }
    }
    p1
}

/// One Cox ring step.
pub fn iterate_step(e: &ExponentData) -> Result<IterationStep> {
    require_platonic_non_factorial(e)?;
    let (mut ordered, mut perm) = order_exponents(e);
    let g = ordered.block_gcds();
    // trailing blocks are all ones, so only the leading three gcds matter
    let total = gcd_all(&g[..3]);
    // move a pair with gcd equal to `total` into positions 1, 2
    let lead = [[0usize, 1, 2], [1, 0, 2], [2, 0, 1]]
        .into_iter()
        .find(|t| g[t[1]].gcd(&g[t[2]]) == total)
        .ok_or_else(|| Error::internal(format!("no admissible leading pair in {ordered}")))?;
    if lead != [0, 1, 2] {
        let mut p: Vec<usize> = lead.to_vec();
        p.extend(3..ordered.blocks.len());
        ordered.blocks = p.iter().map(|&k| ordered.blocks[k].clone()).collect();
        perm = p.iter().map(|&k| perm[k]).collect();
    }
    if ordered.blocks[3..].iter().any(|b| !b[0].is_one()) {
        return Err(Error::internal(format!("trailing blocks of {ordered} are not all ones")));
    }
    let c = (0..ordered.blocks.len()).map(|i| component_count(&ordered, i)).collect::<Result<Vec<_>>>()?;
    let p1 = saturated_rows(&ordered);
    let offsets = ordered.offsets();
    let mut blocks = Vec::new();
    for (i, b) in ordered.blocks.iter().enumerate() {
        let new: Vec<Int> = (0..b.len()).map(|j| gcd_all(&p1.col(offsets[i] + j))).collect();
        for _ in num_iter(&c[i]) {
            blocks.push(new.clone());
        }
    }
    let raw_output = ExponentData { variant: Variant::Two, blocks, m: ordered.m };
    let (normalized_output, _) = normalize_exponents(&raw_output);
    Ok(IterationStep { input: e.clone(), block_permutation: perm, ordered, c, p1, raw_output, normalized_output })
}

fn num_iter(k: &Int) -> std::ops::Range<u64> {
    0..u64::try_from(k).expect("component count fits in u64")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    Factorial,
    Polynomial(usize),
}

/// States of the iteration, each a normalized exponent datum, ending in a
/// factorial ring or a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub states: Vec<Normal<ExponentData>>,
    pub steps: Vec<IterationStep>,
    pub terminal: Terminal,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let terminal = match self.terminal {
            Terminal::Factorial => json!("factorial"),
            Terminal::Polynomial(d) => json!({ "polynomial": d }),
        };
        json!({
            "states": self.states.iter().map(Normal::to_json).collect::<Vec<_>>(),
            "terminal": terminal,
        })
    }
}

pub fn iterate_chain_from_data(data: &DefiningData, max_steps: usize) -> Result<Chain> {
    iterate_chain(&cox_exponents(data), max_steps)
}

pub fn iterate_chain(start: &ExponentData, max_steps: usize) -> Result<Chain> {
    if start.variant != Variant::Two {
        return Err(Error::pre("iteration needs variant 2 exponent data"));
    }
    let (first, _) = normalize_exponents(start);
    let mut states = vec![first.clone()];
    let mut steps = Vec::new();
    let mut current = match first {
        Normal::Polynomial(d) => return Ok(Chain { states, steps, terminal: Terminal::Polynomial(d) }),
        Normal::Ring(e) => e,
    };
    if !is_platonic_ring(&current)? {
        return Err(Error::pre(format!("{current} is not platonic, the variety is not log terminal")));
    }
    loop {
        if is_factorial(&current) {
            return Ok(Chain { states, steps, terminal: Terminal::Factorial });
        }
        if steps.len() >= max_steps {
            return Err(Error::internal(format!("no factorial ring after {max_steps} steps")));
        }
        let step = iterate_step(&current)?;
        let next = step.normalized_output.clone();
        states.push(next.clone());
        steps.push(step);
        match next {
            Normal::Polynomial(d) => return Ok(Chain { states, steps, terminal: Terminal::Polynomial(d) }),
            Normal::Ring(e) => current = e,
        }
    }
}

fn ones(n: usize) -> Vec<Int> {
    vec![Int::one(); n]
}

fn halve(b: &[Int]) -> Vec<Int> {
    b.iter().map(|x| x / 2).collect()
}

fn divide(b: &[Int], k: &Int) -> Vec<Int> {
    b.iter().map(|x| x / k).collect()
}

fn repeat(out: &mut Vec<Vec<Int>>, b: Vec<Int>, k: usize) {
    for _ in 0..k {
        out.push(b.clone());
    }
}

/// Table lookup for ordered data in the given block order.
fn table_row(e: &ExponentData) -> Option<Vec<Vec<Int>>> {
    let b = &e.blocks;
    let g = e.block_gcds();
    let lead: Vec<i64> = b[..3].iter().map(|x| i64::try_from(&x[0]).unwrap_or(i64::MAX)).collect();
    let two = Int::from(2);
    let n = |i: usize| b[i].len();
    let mut out = Vec::new();
    let tail = |out: &mut Vec<Vec<Int>>, from: usize, k: usize| {
        for blk in &b[from..] {
            repeat(out, ones(blk.len()), k);
        }
    };
    match lead[..] {
        [4, 3, 2] => {
            if g[0].is_odd() {
                return None;
            }
            repeat(&mut out, b[1].clone(), 2);
            out.push(halve(&b[0]));
            out.push(ones(n(2)));
            tail(&mut out, 3, 2);
        }
        [3, 3, 2] => {
            repeat(&mut out, b[2].clone(), 3);
            out.push(ones(n(0)));
            out.push(ones(n(1)));
            tail(&mut out, 3, 3);
        }
        [_, 2, 2] => {
            if gcd_all(&g[..3]) == two {
                repeat(&mut out, halve(&b[0]), 2);
                repeat(&mut out, ones(n(1)), 2);
                // the component count of the third block is two as well
                repeat(&mut out, ones(n(2)), 2);
                tail(&mut out, 3, 4);
            } else if g[0].is_odd() {
                repeat(&mut out, b[0].clone(), 2);
                out.push(ones(n(1)));
                out.push(ones(n(2)));
                tail(&mut out, 3, 2);
            } else if g[2].is_one() && g[1] == two {
                out.push(halve(&b[0]));
                repeat(&mut out, b[2].clone(), 2);
                out.push(ones(n(1)));
                tail(&mut out, 3, 2);
            } else {
                return None;
            }
        }
        [_, _, 1] => {
            let d = g[0].gcd(&g[1]);
            out.push(divide(&b[0], &d));
            out.push(divide(&b[1], &d));
            let k = usize::try_from(&d).ok()?;
            tail(&mut out, 2, k);
        }
        _ => return None,
    }
    Some(out)
}

/// Exponents of the next Cox ring read off the classification table of
/// leading triples, independently of the lattice computation.
///
/// Ties of the second and third leading exponent are tried in both orders.
pub fn ithelp_oracle(e: &ExponentData) -> Result<ExponentData> {
    require_platonic_non_factorial(e)?;
    let (ordered, _) = order_exponents(e);
    let mut candidates = vec![ordered.clone()];
    if ordered.blocks[1][0] == ordered.blocks[2][0] {
        let mut swapped = ordered.clone();
        swapped.blocks.swap(1, 2);
        candidates.push(swapped);
    }
    for c in &candidates {
        if let Some(blocks) = table_row(c) {
            return Ok(ExponentData { variant: Variant::Two, blocks, m: e.m });
        }
    }
    Err(Error::pre(format!("no table row matches {ordered}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::genus;
    use crate::linalg::cokernel_structure;
    use proptest::prelude::*;

    fn e(blocks: &[&[i64]], m: usize) -> ExponentData {
        ExponentData::two(blocks, m)
    }

    fn ring(blocks: &[&[i64]], m: usize) -> Normal<ExponentData> {
        Normal::Ring(e(blocks, m))
    }

    #[test]
    fn e7_step_gives_e6() {
        let s = iterate_step(&e(&[&[4], &[3], &[2]], 0)).unwrap();
        assert_eq!(s.c, vec![Int::from(1), Int::from(2), Int::from(1)]);
        assert_eq!(s.raw_output.blocks.len(), 4);
        assert_eq!(s.normalized_output, ring(&[&[3], &[3], &[2]], 0));
    }

    #[test]
    fn e6_step_gives_d4() {
        let s = iterate_step(&e(&[&[3], &[3], &[2]], 0)).unwrap();
        assert_eq!(s.normalized_output, ring(&[&[2], &[2], &[2]], 0));
    }

    #[test]
    fn d4_step_gives_plane() {
        let s = iterate_step(&e(&[&[2], &[2], &[2]], 0)).unwrap();
        assert_eq!(s.raw_output.blocks.len(), 6);
        assert_eq!(s.normalized_output, Normal::Polynomial(2));
    }

    #[test]
    fn step_rejects_factorial_and_non_platonic() {
        assert!(matches!(iterate_step(&e(&[&[5], &[3], &[2]], 0)), Err(Error::Precondition(_))));
        assert!(matches!(iterate_step(&e(&[&[4], &[4], &[2]], 0)), Err(Error::Precondition(_))));
    }

    #[test]
    fn cox_exponents_read_off_the_matrix() {
        let d = DefiningData::two(&[&[4], &[3], &[2]], 1, &[&[-1, -1, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(cox_exponents(&d), e(&[&[4], &[3], &[2]], 1));
    }

    #[test]
    fn surface_chains() {
        let c = iterate_chain(&e(&[&[5], &[3], &[2]], 0), 10).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terminal, Terminal::Factorial);
        let c = iterate_chain(&e(&[&[4], &[3], &[2]], 0), 10).unwrap();
        assert_eq!(
            c.states,
            vec![ring(&[&[4], &[3], &[2]], 0), ring(&[&[3], &[3], &[2]], 0), ring(&[&[2], &[2], &[2]], 0), Normal::Polynomial(2)]
        );
        assert_eq!(c.terminal, Terminal::Polynomial(2));
    }

    #[test]
    fn threefold_chain_with_free_variable() {
        let c = iterate_chain(&e(&[&[4], &[3], &[2]], 1), 10).unwrap();
        assert_eq!(c.states.last(), Some(&Normal::Polynomial(3)));
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn factorial_start() {
        let c = iterate_chain(&e(&[&[2], &[2, 1], &[2, 1]], 0), 10).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terminal, Terminal::Factorial);
    }

    #[test]
    fn chain_rejects_non_platonic() {
        assert!(matches!(iterate_chain(&e(&[&[3], &[3], &[3]], 0), 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn oracle_rows() {
        assert_eq!(ithelp_oracle(&e(&[&[4], &[3], &[2]], 0)).unwrap().blocks, e(&[&[3], &[3], &[2], &[1]], 0).blocks);
        let o = ithelp_oracle(&e(&[&[6], &[2], &[2]], 0)).unwrap();
        assert_eq!(normalize_exponents(&o).0, Normal::Polynomial(2));
        // the row for (x,y,1) with gcd 2
        let o = ithelp_oracle(&e(&[&[6], &[4, 2], &[1]], 0)).unwrap();
        assert_eq!(o.blocks, e(&[&[3], &[2, 1], &[1], &[1]], 0).blocks);
        assert!(normalize_exponents(&o).0.is_polynomial());
    }

    #[test]
    fn single_third_block_copy_is_not_enough() {
        // with a third block of length two the literal row (one copy of the
        // ones vector) differs from the lattice computation
        let d = e(&[&[6], &[2], &[2, 2]], 0);
        let step = iterate_step(&d).unwrap();
        assert_eq!(step.c[2], Int::from(2));
        let literal = e(&[&[3], &[3], &[1], &[1], &[1, 1]], 0);
        assert_ne!(normalize_exponents(&literal).0, step.normalized_output);
        let oracle = ithelp_oracle(&d).unwrap();
        assert_eq!(normalize_exponents(&oracle).0, step.normalized_output);
    }

    #[test]
    fn second_block_gcd_one_uses_swapped_row() {
        let d = e(&[&[4], &[2, 1], &[2]], 0);
        let step = iterate_step(&d).unwrap();
        assert_eq!(normalize_exponents(&ithelp_oracle(&d).unwrap()).0, step.normalized_output);
    }

    fn saturates(e: &ExponentData, p1: &IntMatrix) -> bool {
        // same rational row space, and the cokernel of P1^T is torsion free
        let p0 = e.p0();
        let stacked = p1.vstack(&p0).unwrap();
        stacked.rank() == p1.rank() && p1.rank() == p0.rank() && cokernel_structure(&p1.transpose()).torsion.is_empty()
    }

    #[test]
    fn saturated_rows_examples() {
        for b in [&[&[4i64][..], &[3], &[2]][..], &[&[3], &[3], &[2]], &[&[2], &[2], &[2]], &[&[6], &[4, 2], &[1], &[1, 1]]] {
            let s = iterate_step(&e(b, 1)).unwrap();
            assert!(saturates(&s.ordered, &s.p1), "{}", s.ordered);
        }
    }

    fn platonic_non_factorial() -> impl Strategy<Value = ExponentData> {
        (prop::collection::vec(prop::collection::vec(1i64..=6, 1..=2), 3..=5), 0usize..=1).prop_filter_map(
            "platonic and not factorial",
            |(blocks, m)| {
                let d = ExponentData::new(
                    Variant::Two,
                    blocks.into_iter().map(|b| b.into_iter().map(Int::from).collect()).collect(),
                    m,
                );
                (is_platonic_ring(&d).unwrap() && !is_factorial(&d)).then_some(d)
            },
        )
    }

    proptest! {
        #[test]
        fn table_agrees_with_lattice_step(d in platonic_non_factorial()) {
            let step = iterate_step(&d).unwrap();
            let oracle = ithelp_oracle(&d).unwrap();
            prop_assert_eq!(normalize_exponents(&oracle).0, step.normalized_output.clone());
            prop_assert!(saturates(&step.ordered, &step.p1));
            let total: Int = step.c.iter().sum();
            prop_assert_eq!(Int::from(step.raw_output.blocks.len() as i64), total);
        }

        #[test]
        fn chains_stay_platonic_and_rational(d in platonic_non_factorial()) {
            let c = iterate_chain(&d, 10).unwrap();
            for s in &c.states[..c.len() - 1] {
                let r = s.ring().unwrap();
                prop_assert!(is_platonic_ring(r).unwrap());
                prop_assert!(!is_factorial(r));
                prop_assert_eq!(genus(r).unwrap(), Int::from(0));
            }
            if let Normal::Ring(last) = c.states.last().unwrap() {
                prop_assert!(is_factorial(last));
                prop_assert_eq!(c.terminal, Terminal::Factorial);
            }
        }
    }
}
