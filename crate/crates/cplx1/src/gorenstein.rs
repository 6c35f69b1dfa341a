//! Gorenstein index, canonical weight and canonical multiplicity, and the
//! normal forms of `P` they lead to.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::acomplex::is_log_terminal;
use crate::data::{DefiningData, Normal, Op, Variant};
use crate::error::{Error, Result};
use crate::linalg::{denominator_lcm, gcd_all, solve_rational, unimodular_completion, Int, IntMatrix, Rat};

/// Gorenstein data of an affine variety.
///
/// `u` solves `P^T u = w` for the canonical divisor vector `w` whose special
/// block is `alpha`; `mu` and `eta` are the two parts of `iota * u`. When the
/// variety is not Q-Gorenstein, every numeric field is zero or empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinData {
    pub q_gorenstein: bool,
    pub iota: Int,
    pub zeta: Int,
    pub mu: Vec<Int>,
    pub eta: Vec<Int>,
    pub u: Vec<Rat>,
}

impl GorensteinData {
    /// `mu` for the anticanonical divisor.
    pub fn anti_mu(&self) -> Vec<Int> {
        self.mu.iter().map(|x| -x).collect()
    }

    /// `eta` for the anticanonical divisor.
    pub fn anti_eta(&self) -> Vec<Int> {
        self.eta.iter().map(|x| -x).collect()
    }
}

/// Canonical divisor vector with special block `alpha`.
pub fn canonical_vector(data: &DefiningData, alpha: usize) -> Vec<Int> {
    let r = Int::from(data.r() as i64);
    let mut w = vec![-Int::one(); data.n() + data.m()];
    let off = data.offsets()[alpha];
    for (j, l) in data.blocks()[alpha].iter().enumerate() {
        w[off + j] = (&r - 1) * l - 1;
    }
    w
}

fn require_affine_two(data: &DefiningData) -> Result<()> {
    if data.variant() != Variant::Two {
        return Err(Error::pre("Gorenstein analysis needs variant 2 data"));
    }
    if !data.affine_profile()?.pointed {
        return Err(Error::pre("columns of P do not span a pointed cone with every column extremal"));
    }
    Ok(())
}

pub fn gorenstein_data(data: &DefiningData) -> Result<GorensteinData> {
    gorenstein_data_with(data, 0)
}

/// As [`gorenstein_data`], with the special block of the canonical divisor
/// chosen as `alpha`.
pub fn gorenstein_data_with(data: &DefiningData, alpha: usize) -> Result<GorensteinData> {
    require_affine_two(data)?;
    if alpha >= data.blocks().len() {
        return Err(Error::pre(format!("block {alpha} does not exist")));
    }
    Ok(gorenstein_unchecked(data, alpha))
}

fn gorenstein_unchecked(data: &DefiningData, alpha: usize) -> GorensteinData {
    let w: Vec<Rat> = canonical_vector(data, alpha).into_iter().map(Rat::from_integer).collect();
    let solution = solve_rational(&data.p().transpose(), &w).expect("shapes agree");
    let Some(u) = solution else {
        return GorensteinData {
            q_gorenstein: false,
            iota: Int::zero(),
            zeta: Int::zero(),
            mu: vec![],
            eta: vec![],
            u: vec![],
        };
    };
    let iota = denominator_lcm(&u);
    let scaled: Vec<Int> = u.iter().map(|q| (q * Rat::from_integer(iota.clone())).to_integer()).collect();
    let r = data.r();
    let eta = scaled[r..].to_vec();
    GorensteinData { q_gorenstein: true, iota, zeta: gcd_all(&eta), mu: scaled[..r].to_vec(), eta, u }
}

/// `P` brought into the shape determined by the canonical weight, together
/// with the anticanonical `mu_0, ..., mu_r` realized by its last row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaShape {
    pub data: DefiningData,
    pub iota: Int,
    pub zeta: Int,
    /// `mu[0]` is `iota (r - 1) - mu[1] - ... - mu[r]`
    pub mu: Vec<Int>,
    pub ops: Vec<Op>,
}

impl ZetaShape {
    /// The last row of `P`.
    pub fn last_row(&self) -> Vec<Int> {
        self.data.d.row(self.data.s() - 1)
    }
}

fn normalized_ring(data: &DefiningData) -> Result<(DefiningData, Vec<Op>)> {
    match data.normalize()? {
        (Normal::Ring(d), ops) => Ok((d, ops)),
        (Normal::Polynomial(_), _) => Err(Error::pre("the ring has no relations after normalization")),
    }
}

fn full_mu(iota: &Int, mu: &[Int]) -> Vec<Int> {
    let r = mu.len() as i64;
    let mu0 = iota * Int::from(r - 1) - mu.iter().sum::<Int>();
    std::iter::once(mu0).chain(mu.iter().cloned()).collect()
}

/// Bring the last row into the shape `zeta nu_ij + mu_i l_ij = iota` and
/// report the realized `mu`. Skips normalization.
fn shape_in_place(data: &DefiningData) -> Result<ZetaShape> {
    let g = gorenstein_unchecked(data, 0);
    if !g.q_gorenstein {
        return Err(Error::pre("the variety is not Q-Gorenstein"));
    }
    let zeta = g.zeta.clone();
    if zeta.is_zero() {
        return Err(Error::internal("canonical weight vanishes on log terminal data"));
    }
    let mut out = data.clone();
    let mut ops = Vec::new();
    let direction: Vec<Int> = g.anti_eta().iter().map(|x| x / &zeta).collect();
    let s = data.s();
    let target: Vec<Int> = (0..s).map(|k| if k + 1 == s { Int::one() } else { Int::zero() }).collect();
    if direction != target {
        let u = unimodular_completion(&direction)?;
        out.transform_lower_rows(&u)?;
        ops.push(Op::TransformLowerRows { u });
    }
    let g2 = gorenstein_unchecked(&out, 0);
    let mut expect = vec![Int::zero(); s];
    expect[s - 1] = zeta.clone();
    if g2.anti_eta() != expect || g2.iota != g.iota {
        return Err(Error::internal("lower-row transformation did not isolate the canonical weight"));
    }
    Ok(ZetaShape { mu: full_mu(&g2.iota, &g2.anti_mu()), data: out, iota: g2.iota, zeta, ops })
}

/// `last row += c * upper row (block - 1)`, shifting `mu_block` by `-c zeta`.
fn shift_mu(shape: &mut ZetaShape, block: usize, c: &Int) {
    if c.is_zero() {
        return;
    }
    let target = shape.data.s() - 1;
    shape.data.add_upper_row(target, block - 1, c);
    shape.ops.push(Op::AddUpperRow { target, source: block - 1, factor: c.clone() });
    shape.mu[block] -= c * &shape.zeta;
    shape.mu[0] += c * &shape.zeta;
}

fn check_preconditions(data: &DefiningData) -> Result<()> {
    require_affine_two(data)?;
    if !gorenstein_unchecked(data, 0).q_gorenstein {
        return Err(Error::pre("the variety is not Q-Gorenstein"));
    }
    if !is_log_terminal(data)? {
        return Err(Error::pre("the variety is not log terminal"));
    }
    Ok(())
}

/// Normal form of `P` driven by the canonical weight. For canonical
/// multiplicity one the last row becomes `(iota - iota (r-1) l_0, iota, ..., iota)`;
/// otherwise it satisfies `zeta nu_ij + mu_i l_ij = iota` with `mu_i = iota`
/// on every block of ones beyond the leading three.
pub fn normal_form_zeta(data: &DefiningData) -> Result<ZetaShape> {
    check_preconditions(data)?;
    let (norm, mut ops) = normalized_ring(data)?;
    let mut shape = shape_in_place(&norm)?;
    ops.append(&mut shape.ops);
    shape.ops = ops;
    let r = shape.data.r();
    if shape.zeta.is_one() {
        for i in 1..=r {
            let c = shape.mu[i].clone();
            shift_mu(&mut shape, i, &c);
        }
    } else {
        for i in 3..=r {
            let c = (&shape.mu[i] - &shape.iota) / &shape.zeta;
            shift_mu(&mut shape, i, &c);
        }
    }
    debug_assert!(satisfies_shape(&shape.data, &shape.iota, &shape.zeta, &shape.mu));
    Ok(shape)
}

/// The conditions on the last row: `zeta nu_ij + mu_i l_ij = iota` for every
/// block, `zeta nu'_k = iota` on free columns, and the gcd condition.
pub fn satisfies_shape(data: &DefiningData, iota: &Int, zeta: &Int, mu: &[Int]) -> bool {
    let last = data.d.row(data.s() - 1);
    let off = data.offsets();
    if mu.len() != data.blocks().len() || mu.iter().sum::<Int>() != iota * Int::from(data.r() as i64 - 1) {
        return false;
    }
    for (i, block) in data.blocks().iter().enumerate() {
        for (j, l) in block.iter().enumerate() {
            if zeta * &last[off[i] + j] + &mu[i] * l != *iota {
                return false;
            }
        }
    }
    if last[data.n()..].iter().any(|x| zeta * x != *iota) {
        return false;
    }
    let mut g: Vec<Int> = mu[1..].to_vec();
    g.push(zeta.clone());
    g.push(iota.clone());
    gcd_all(&g).is_one()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZetaCase {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl fmt::Display for ZetaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZetaCase::I => "i",
            ZetaCase::II => "ii",
            ZetaCase::III => "iii",
            ZetaCase::IV => "iv",
            ZetaCase::V => "v",
            ZetaCase::VI => "vi",
        })
    }
}

/// Result of matching a matrix of canonical multiplicity above one against
/// the case table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaCaseMatch {
    pub case: ZetaCase,
    pub shape: ZetaShape,
}

impl ZetaCaseMatch {
    pub fn leading_triple(&self) -> [Int; 3] {
        leading_triple(&self.shape.data)
    }
}

fn leading_triple(data: &DefiningData) -> [Int; 3] {
    let b = data.blocks();
    let lead = |i: usize| b.get(i).map(|x| x[0].clone()).unwrap_or_else(Int::one);
    [lead(0), lead(1), lead(2)]
}

/// Target `(mu_0, mu_1, mu_2)` of each case given the triple, zeta and iota.
fn zeta_targets(t: &[Int; 3], zeta: &Int, iota: &Int) -> Vec<(ZetaCase, [Option<Int>; 3])> {
    let small = |v: &[i64; 3]| t[0] == Int::from(v[0]) && t[1] == Int::from(v[1]) && t[2] == Int::from(v[2]);
    let z = |k: i64| *zeta == Int::from(k);
    let c = |x: i64| Some(Int::from(x));
    let i = || Some(iota.clone());
    let two = Int::from(2);
    let mut out = Vec::new();
    if small(&[4, 3, 2]) && z(2) {
        out.push((ZetaCase::I, [c(-1), i(), c(1)]));
    }
    if small(&[3, 3, 2]) && z(3) {
        out.push((ZetaCase::II, [c(1), c(-1), i()]));
    }
    if t[1] == two && t[2] == two {
        if t[0].is_odd() && z(4) {
            out.push((ZetaCase::III, [i(), c(1), c(-1)]));
        }
        if t[0].is_even() && z(2) {
            out.push((ZetaCase::IV, [c(1), c(-1), i()]));
        }
        if z(2) {
            out.push((ZetaCase::V, [i(), c(1), c(-1)]));
        }
    }
    if t[2].is_one() {
        out.push((ZetaCase::VI, [None, None, i()]));
    }
    out
}

/// Permutations of the first three blocks that keep the leading triple.
fn triple_preserving_swaps(data: &DefiningData) -> Vec<Option<(usize, usize)>> {
    let t = leading_triple(data);
    let mut out = vec![None];
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        if b < data.blocks().len() && t[a] == t[b] {
            out.push(Some((a, b)));
        }
    }
    out
}

/// Match data of canonical multiplicity above one against the case table.
pub fn zeta_case(data: &DefiningData) -> Result<ZetaCaseMatch> {
    let base = normal_form_zeta(data)?;
    if base.zeta.is_one() {
        return Err(Error::pre("canonical multiplicity is one"));
    }
    let t = leading_triple(&base.data);
    for (case, target) in zeta_targets(&t, &base.zeta, &base.iota) {
        for swap in triple_preserving_swaps(&base.data) {
            let mut start = base.data.clone();
            let mut ops = base.ops.clone();
            if let Some((a, b)) = swap {
                start.exchange_blocks(a, b);
                ops.push(Op::ExchangeBlocks { a, b });
            }
            let mut shape = shape_in_place(&start)?;
            ops.append(&mut shape.ops);
            shape.ops = ops;
            for i in 3..shape.mu.len() {
                let c = (&shape.mu[i] - &shape.iota) / &shape.zeta;
                shift_mu(&mut shape, i, &c);
            }
            if let Some(found) = hit_target(shape, &target) {
                return Ok(ZetaCaseMatch { case, shape: found });
            }
        }
    }
    Err(Error::internal(format!(
        "no case matches triple ({},{},{}) with zeta {}",
        t[0], t[1], t[2], base.zeta
    )))
}

fn hit_target(mut shape: ZetaShape, target: &[Option<Int>; 3]) -> Option<ZetaShape> {
    let mut shifts = Vec::new();
    for k in 1..3 {
        if let Some(want) = &target[k] {
            let diff = &shape.mu[k] - want;
            if !diff.is_multiple_of(&shape.zeta) {
                return None;
            }
            shifts.push((k, diff / &shape.zeta));
        }
    }
    for (k, c) in shifts {
        shift_mu(&mut shape, k, &c);
    }
    if let Some(want) = &target[0] {
        if shape.mu[0] != *want {
            return None;
        }
    }
    Some(shape)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeadingCase {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
}

impl fmt::Display for LeadingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeadingCase::I => "i",
            LeadingCase::II => "ii",
            LeadingCase::III => "iii",
            LeadingCase::IV => "iv",
            LeadingCase::V => "v",
            LeadingCase::VI => "vi",
            LeadingCase::VII => "vii",
            LeadingCase::VIII => "viii",
            LeadingCase::IX => "ix",
        })
    }
}

/// Leading exponents and the penultimate-row entries above them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingBlockData {
    pub triple: [Int; 3],
    pub d_triple: [Int; 3],
    pub case: LeadingCase,
    pub data: DefiningData,
    pub ops: Vec<Op>,
}

impl fmt::Display for LeadingBlockData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.triple;
        let [x, y, z] = &self.d_triple;
        write!(f, "({a},{b},{c};{x},{y},{z}) case {}", self.case)
    }
}

fn leading_targets(t: &[Int; 3]) -> Vec<(LeadingCase, [i64; 3])> {
    let is = |v: [i64; 3]| t[0] == Int::from(v[0]) && t[1] == Int::from(v[1]) && t[2] == Int::from(v[2]);
    let two = Int::from(2);
    if is([5, 3, 2]) {
        vec![(LeadingCase::I, [0, 0, 0])]
    } else if is([4, 3, 2]) {
        vec![(LeadingCase::II, [0, 0, 0]), (LeadingCase::III, [1, 0, 0])]
    } else if is([3, 3, 2]) {
        vec![(LeadingCase::IV, [0, 0, 0]), (LeadingCase::V, [1, 0, 0])]
    } else if t[1] == two && t[2] == two {
        vec![(LeadingCase::VI, [0, 0, 0]), (LeadingCase::VII, [1, 0, 0]), (LeadingCase::VIII, [0, 1, 0])]
    } else {
        vec![]
    }
}

/// Gorenstein threefold data of canonical multiplicity one, brought to one of
/// the nine leading block forms.
pub fn leading_block_data(data: &DefiningData) -> Result<LeadingBlockData> {
    if data.s() != 2 {
        return Err(Error::pre("leading block data needs a threefold"));
    }
    let base = normal_form_zeta(data)?;
    if !base.iota.is_one() || !base.zeta.is_one() {
        return Err(Error::pre(format!(
            "leading block data needs Gorenstein index one and canonical multiplicity one, got {} and {}",
            base.iota, base.zeta
        )));
    }
    let t = leading_triple(&base.data);
    let targets = leading_targets(&t);
    if targets.is_empty() {
        if !t[2].is_one() {
            return Err(Error::internal(format!("triple ({},{},{}) is not platonic", t[0], t[1], t[2])));
        }
        let mut cand = prepared(&base.data, &base.ops, None, false)?;
        let dd = cand.d_triple();
        let a = [Int::zero(), &dd[1] - &dd[2], -dd[1].clone()];
        cand.apply_recipe(&a);
        return cand.finish(LeadingCase::IX);
    }
    for (case, target) in targets {
        for swap in triple_preserving_swaps(&base.data) {
            for flip in [false, true] {
                let mut cand = prepared(&base.data, &base.ops, swap, flip)?;
                let dd = cand.d_triple();
                let rhs: Vec<Rat> = (0..3).map(|k| Rat::from_integer(Int::from(target[k]) - &dd[k])).collect();
                let m = cand.recipe_matrix();
                let Some(a) = solve_rational(&m, &rhs)? else { continue };
                if a.iter().all(|q| q.is_integer()) {
                    let a: Vec<Int> = a.iter().map(|q| q.to_integer()).collect();
                    cand.apply_recipe(&[a[0].clone(), a[1].clone(), a[2].clone()]);
                    return cand.finish(case);
                }
            }
        }
    }
    Err(Error::internal("no leading block form is reachable"))
}

struct Candidate {
    data: DefiningData,
    ops: Vec<Op>,
}

fn prepared(start: &DefiningData, ops: &[Op], swap: Option<(usize, usize)>, flip: bool) -> Result<Candidate> {
    let mut data = start.clone();
    let mut ops = ops.to_vec();
    if let Some((a, b)) = swap {
        data.exchange_blocks(a, b);
        ops.push(Op::ExchangeBlocks { a, b });
        let mut shape = shape_in_place(&data)?;
        for i in 1..=shape.data.r() {
            let c = shape.mu[i].clone();
            shift_mu(&mut shape, i, &c);
        }
        data = shape.data;
        ops.append(&mut shape.ops);
    }
    if flip {
        data.negate_lower_row(0);
        ops.push(Op::NegateLowerRow { row: 0 });
    }
    let mut cand = Candidate { data, ops };
    // clear the penultimate entries over blocks beyond the leading three
    for i in 3..cand.data.blocks().len() {
        let col = cand.data.column_index(i, 0);
        let f = -cand.data.d[(0, col)].clone();
        cand.add_upper(i - 1, &f);
    }
    Ok(cand)
}

impl Candidate {
    fn add_upper(&mut self, source: usize, f: &Int) {
        if f.is_zero() {
            return;
        }
        self.data.add_upper_row(0, source, f);
        self.ops.push(Op::AddUpperRow { target: 0, source, factor: f.clone() });
    }

    fn d_triple(&self) -> [Int; 3] {
        let c = |i: usize| self.data.d[(0, self.data.column_index(i, 0))].clone();
        [c(0), c(1), c(2)]
    }

    /// Columns: effect on the three leading penultimate entries of adding
    /// upper row 1, upper row 2, and the last row minus all upper rows
    /// beyond the second.
    fn recipe_matrix(&self) -> IntMatrix {
        let t = leading_triple(&self.data);
        let last0 = Int::one() - &t[0];
        IntMatrix::from_rows(vec![
            vec![-t[0].clone(), -t[0].clone(), last0],
            vec![t[1].clone(), Int::zero(), Int::one()],
            vec![Int::zero(), t[2].clone(), Int::one()],
        ])
        .expect("square")
    }

    fn apply_recipe(&mut self, a: &[Int; 3]) {
        self.add_upper(0, &a[0]);
        self.add_upper(1, &a[1]);
        if !a[2].is_zero() {
            self.data.combine_lower_rows(0, 1, &a[2]);
            self.ops.push(Op::CombineLowerRows { target: 0, source: 1, factor: a[2].clone() });
            for i in 3..self.data.blocks().len() {
                let f = -a[2].clone();
                self.add_upper(i - 1, &f);
            }
        }
    }

    fn finish(self, case: LeadingCase) -> Result<LeadingBlockData> {
        let triple = leading_triple(&self.data);
        let d_triple = self.d_triple();
        for i in 3..self.data.blocks().len() {
            if !self.data.d[(0, self.data.column_index(i, 0))].is_zero() {
                return Err(Error::internal("penultimate entries beyond the leading block did not vanish"));
            }
        }
        let ok_data = DefiningData::new(self.data.exponents.clone(), self.data.d.clone(), self.data.a.clone())?;
        Ok(LeadingBlockData { triple, d_triple, case, data: ok_data, ops: self.ops })
    }
}

/// The last row `(1 - (r-1) l_0, 1, ..., 1)` completing exponent data.
pub fn gorenstein_completion_row(e: &crate::data::ExponentData) -> Vec<Int> {
    let r = Int::from(e.r() as i64);
    let mut row = Vec::with_capacity(e.n() + e.m);
    for (i, b) in e.blocks.iter().enumerate() {
        for l in b {
            row.push(if i == 0 { Int::one() - (&r - 1) * l } else { Int::one() });
        }
    }
    row.extend(std::iter::repeat_n(Int::one(), e.m));
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::ExponentData;
    use crate::linalg::{int, ints, rat_frac};
    use proptest::prelude::*;

    fn from_p(blocks: &[&[i64]], m: usize, d: &[&[i64]]) -> DefiningData {
        DefiningData::two(blocks, m, d)
    }

    #[test]
    fn e6_index_nine() {
        let d = from_p(&[&[3], &[3], &[2]], 0, &[&[2, 4, -3]]);
        let g = gorenstein_data(&d).unwrap();
        assert!(g.q_gorenstein);
        assert_eq!(g.u, vec![rat_frac(1, 9), rat_frac(-1, 1), rat_frac(-1, 3)]);
        assert_eq!(g.iota, int(9));
        assert_eq!(g.zeta, int(3));
    }

    #[test]
    fn matrix_eight_is_gorenstein() {
        let d = from_p(&[&[5], &[3], &[2]], 1, &[&[0, 0, 0, 1], &[-4, 1, 1, 1]]);
        let g = gorenstein_data(&d).unwrap();
        assert_eq!((g.iota, g.zeta), (int(1), int(1)));
        assert_eq!(g.eta, ints(&[0, -1]));
    }

    #[test]
    fn not_q_gorenstein() {
        // the fifth column lies inside the cone over the others: not affine
        let d = from_p(&[&[1, 1], &[2], &[2]], 1, &[&[0, 1, 0, 0, 1], &[0, 0, 1, 1, 2]]);
        assert!(!d.affine_profile().unwrap().pointed);
        assert!(matches!(gorenstein_data(&d), Err(Error::Precondition(_))));
        let d = from_p(&[&[1, 1], &[1, 1], &[2]], 0, &[&[0, 0, 0, -1, -1], &[0, -1, -1, -1, -1]]);
        assert!(d.affine_profile().unwrap().pointed);
        assert!(!gorenstein_data(&d).unwrap().q_gorenstein);
    }

    #[test]
    fn alpha_choice_does_not_matter() {
        let d = from_p(&[&[3], &[3], &[2]], 0, &[&[2, 4, -3]]);
        for alpha in 0..3 {
            let g = gorenstein_data_with(&d, alpha).unwrap();
            assert_eq!((g.iota, g.zeta), (int(9), int(3)));
        }
    }

    #[test]
    fn e8_is_fixed() {
        let d = from_p(&[&[5], &[3], &[2]], 0, &[&[-4, 1, 1]]);
        let nf = normal_form_zeta(&d).unwrap();
        assert_eq!(nf.data, d);
        assert!(nf.ops.is_empty());
    }

    #[test]
    fn cor_shape_after_scrambling() {
        // matrix (8) with the last row disguised
        let d = from_p(&[&[5], &[3], &[2]], 1, &[&[0, 0, 0, 1], &[-4, 1, 1, 2]]);
        let nf = normal_form_zeta(&d).unwrap();
        assert_eq!(nf.last_row(), ints(&[-4, 1, 1, 1]));
        assert_eq!(nf.data.class_group(), d.class_group());
    }

    #[test]
    fn matrix_nine_keeps_its_last_row() {
        let d = from_p(&[&[1, 1], &[1, 1], &[1, 1]], 0, &[&[0, 1, 0, 1, 0, 1], &[0, 0, 1, 1, 0, 0]]);
        let nf = normal_form_zeta(&d).unwrap();
        assert_eq!(nf.zeta, int(2));
        assert_eq!(nf.last_row(), ints(&[0, 0, 1, 1, 0, 0]));
        assert!(satisfies_shape(&nf.data, &nf.iota, &nf.zeta, &nf.mu));
    }

    #[test]
    fn d5_is_case_five() {
        let d = from_p(&[&[3], &[2], &[2]], 0, &[&[-4, 3, 1]]);
        let g = gorenstein_data(&d).unwrap();
        assert_eq!((g.iota.clone(), g.zeta.clone()), (int(4), int(2)));
        let m = zeta_case(&d).unwrap();
        assert_eq!(m.case, ZetaCase::V);
        assert_eq!(m.shape.mu[..3], ints(&[4, 1, -1]));
    }

    #[test]
    fn thirteen_and_fourteen_are_case_six() {
        let d = from_p(&[&[3], &[1, 1], &[1, 1]], 0, &[&[0, 0, 1, 0, 1], &[2, 0, 0, 0, 0]]);
        assert_eq!(zeta_case(&d).unwrap().case, ZetaCase::VI);
        let d = from_p(&[&[3], &[3], &[1, 1]], 0, &[&[0, 0, 0, 1], &[-1, 2, 0, 0]]);
        let m = zeta_case(&d).unwrap();
        assert_eq!(m.case, ZetaCase::VI);
        assert_eq!(m.shape.zeta, int(2));
    }

    #[test]
    fn zeta_case_rejects_multiplicity_one() {
        let d = from_p(&[&[5], &[3], &[2]], 0, &[&[-4, 1, 1]]);
        assert!(matches!(zeta_case(&d), Err(Error::Precondition(_))));
    }

    #[test]
    fn leading_block_examples() {
        let d18 = from_p(&[&[4, 1], &[3], &[2]], 0, &[&[1, 3, 0, 0], &[-3, 0, 1, 1]]);
        let l = leading_block_data(&d18).unwrap();
        assert_eq!(l.to_string(), "(4,3,2;1,0,0) case iii");
        let d8 = from_p(&[&[5], &[3], &[2]], 1, &[&[0, 0, 0, 1], &[-4, 1, 1, 1]]);
        assert_eq!(leading_block_data(&d8).unwrap().to_string(), "(5,3,2;0,0,0) case i");
        let d4 = from_p(&[&[3], &[2], &[2]], 1, &[&[0, 0, 0, 1], &[-2, 1, 1, 1]]);
        assert_eq!(leading_block_data(&d4).unwrap().to_string(), "(3,2,2;0,0,0) case vi");
    }

    #[test]
    fn leading_block_for_trailing_ones() {
        // matrix (9)-like data is not Gorenstein; use (13)-free data with triple (k0,k1,1)
        let d = from_p(&[&[3], &[2], &[1, 1]], 0, &[&[0, 1, 2, 0], &[-2, 1, 1, 1]]);
        let l = leading_block_data(&d).unwrap();
        assert_eq!(l.case, LeadingCase::IX);
        assert_eq!(l.d_triple[1..], ints(&[0, 0]));
    }

    fn platonic_exponents() -> impl Strategy<Value = ExponentData> {
        (prop::collection::vec(prop::collection::vec(1i64..7, 1..3), 2..5), 0usize..2)
            .prop_map(|(blocks, m)| ExponentData::new(Variant::Two, blocks.iter().map(|b| ints(b)).collect(), m))
            .prop_filter("platonic", |e| crate::invariants::is_platonic_ring(e).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn platonic_completion_is_gorenstein(e in platonic_exponents()) {
            // a primitive, pointed completion by the canonical row
            let mut blocks = e.blocks.clone();
            while blocks.len() < 3 { blocks.push(ints(&[1])); }
            let e = ExponentData::new(Variant::Two, blocks, e.m);
            let d = IntMatrix::from_rows(vec![gorenstein_completion_row(&e)]).unwrap();
            let Ok(data) = DefiningData::new(e, d, None) else { return Ok(()) };
            let Ok(g) = gorenstein_data(&data) else { return Ok(()) };
            prop_assert!(g.q_gorenstein);
            prop_assert_eq!(g.iota, int(1));
            prop_assert_eq!(g.zeta, int(1));
        }

        #[test]
        fn square_p_is_q_gorenstein(a in 1i64..6, b in 1i64..6, c in 1i64..6, x in -3i64..4, y in -3i64..4, z in -3i64..4) {
            let Ok(data) = DefiningData::try_two(&[&[a], &[b], &[c]], 0, &[&[x, y, z]]) else { return Ok(()) };
            if let Ok(g) = gorenstein_data(&data) {
                prop_assert!(g.q_gorenstein);
            }
        }

        #[test]
        fn normal_form_satisfies_shape(x in -3i64..4, y in -3i64..4, t in 0usize..4) {
            let triples: [[i64; 3]; 4] = [[5, 3, 2], [4, 3, 2], [3, 3, 2], [3, 2, 2]];
            let [a, b, c] = triples[t];
            let Ok(data) = DefiningData::try_two(&[&[a], &[b], &[c]], 0, &[&[x, y, 1]]) else { return Ok(()) };
            let Ok(nf) = normal_form_zeta(&data) else { return Ok(()) };
            prop_assert!(satisfies_shape(&nf.data, &nf.iota, &nf.zeta, &nf.mu));
            let g = gorenstein_data(&nf.data).unwrap();
            prop_assert_eq!(g.iota, nf.iota.clone());
            if nf.zeta > int(1) {
                let m = zeta_case(&data).unwrap();
                prop_assert!(satisfies_shape(&m.shape.data, &m.shape.iota, &m.shape.zeta, &m.shape.mu));
            }
        }
    }
}
