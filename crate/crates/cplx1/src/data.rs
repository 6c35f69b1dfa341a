//! Defining data `(A, P)`: exponent blocks, free columns and the lower rows
//! `d`, with parsing, validation, admissible operations and normal forms.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{cokernel_structure, gcd_all, is_primitive, parse_rat, Cokernel, Int, IntMatrix, Rat};
use crate::polyhedra::cone_hull;

pub const FORMAT: &str = "cplx1/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    One,
    Two,
}

impl Variant {
    pub fn number(self) -> u8 {
        match self {
            Variant::One => 1,
            Variant::Two => 2,
        }
    }
}

/// Exponent blocks and the number of free variables, i.e. a ring `R(A, P0)`
/// up to its coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentData {
    pub variant: Variant,
    pub blocks: Vec<Vec<Int>>,
    pub m: usize,
}

impl ExponentData {
    pub fn new(variant: Variant, blocks: Vec<Vec<Int>>, m: usize) -> Self {
        ExponentData { variant, blocks, m }
    }

    /// Variant 2 data from small literals.
    pub fn two(blocks: &[&[i64]], m: usize) -> Self {
        let blocks = blocks.iter().map(|b| b.iter().map(|&x| Int::from(x)).collect()).collect();
        ExponentData { variant: Variant::Two, blocks, m }
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Number of rows of `P0`.
    pub fn r(&self) -> usize {
        match self.variant {
            Variant::Two => self.blocks.len() - 1,
            Variant::One => self.blocks.len(),
        }
    }

    pub fn relations(&self) -> usize {
        match self.variant {
            Variant::Two => self.blocks.len().saturating_sub(2),
            Variant::One => self.blocks.len().saturating_sub(1),
        }
    }

    /// Krull dimension of the ring.
    pub fn ring_dimension(&self) -> usize {
        self.n() + self.m - self.relations()
    }

    /// First column index of each block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for b in &self.blocks {
            out.push(acc);
            acc += b.len();
        }
        out
    }

    /// gcd of each block.
    pub fn block_gcds(&self) -> Vec<Int> {
        self.blocks.iter().map(gcd_all).collect()
    }

    pub fn block_maxima(&self) -> Vec<Int> {
        self.blocks.iter().map(|b| b.iter().max().cloned().unwrap_or_default()).collect()
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        let min_blocks = match self.variant {
            Variant::Two => 2,
            Variant::One => 1,
        };
        if self.blocks.len() < min_blocks {
            v.push(format!("variant {} needs at least {} blocks", self.variant.number(), min_blocks));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if b.is_empty() {
                v.push(format!("block {i} is empty"));
            }
            for (j, l) in b.iter().enumerate() {
                if !l.is_positive() {
                    v.push(format!("exponent l[{i}][{j}] = {l} is not positive"));
                }
            }
        }
        v
    }

    /// The matrix `P0`.
    pub fn p0(&self) -> IntMatrix {
        let n = self.n();
        let cols = n + self.m;
        let off = self.offsets();
        let r = self.r();
        let mut p = IntMatrix::zeros(r, cols);
        match self.variant {
            Variant::Two => {
                for row in 0..r {
                    for (j, l) in self.blocks[0].iter().enumerate() {
                        p[(row, off[0] + j)] = -l;
                    }
                    let i = row + 1;
                    for (j, l) in self.blocks[i].iter().enumerate() {
                        p[(row, off[i] + j)] = l.clone();
                    }
                }
            }
            Variant::One => {
                for i in 0..r {
                    for (j, l) in self.blocks[i].iter().enumerate() {
                        p[(i, off[i] + j)] = l.clone();
                    }
                }
            }
        }
        p
    }

    pub fn to_json(&self) -> Value {
        json!({
            "variant": self.variant.number(),
            "blocks": self.blocks.iter().map(|b| b.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "m": self.m,
        })
    }
}

impl fmt::Display for ExponentData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("({})", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "<{}; m={}>", blocks.join(","), self.m)
    }
}

/// Result of normalization: a ring in normal form, or a polynomial ring
/// of the given Krull dimension once every relation has been eliminated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Normal<T> {
    Ring(T),
    Polynomial(usize),
}

impl<T> Normal<T> {
    pub fn ring(&self) -> Option<&T> {
        match self {
            Normal::Ring(t) => Some(t),
            Normal::Polynomial(_) => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, Normal::Polynomial(_))
    }
}

impl fmt::Display for Normal<ExponentData> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normal::Ring(e) => write!(f, "{e}"),
            Normal::Polynomial(d) => write!(f, "polynomial({d})"),
        }
    }
}

impl Normal<ExponentData> {
    pub fn to_json(&self) -> Value {
        match self {
            Normal::Ring(e) => e.to_json(),
            Normal::Polynomial(d) => json!({ "polynomial": d }),
        }
    }
}

/// One admissible operation, as recorded in operation logs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    /// Reorder the columns of a block: new position `k` holds old column `perm[k]`.
    SortBlock { block: usize, perm: Vec<usize> },
    /// New block `k` is old block `perm[k]`.
    PermuteBlocks { perm: Vec<usize> },
    ExchangeBlocks { a: usize, b: usize },
    SwapInBlock { block: usize, a: usize, b: usize },
    SwapFree { a: usize, b: usize },
    /// `d[target] += factor * P0[source]`
    AddUpperRow { target: usize, source: usize, factor: Int },
    /// `d[target] += factor * d[source]`
    CombineLowerRows { target: usize, source: usize, factor: Int },
    NegateLowerRow { row: usize },
    /// `d := U d`
    TransformLowerRows { u: IntMatrix },
    RemoveRedundantBlock { block: usize },
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::SortBlock { block, perm } => write!(f, "sort block {block} by {perm:?}"),
            Op::PermuteBlocks { perm } => write!(f, "permute blocks {perm:?}"),
            Op::ExchangeBlocks { a, b } => write!(f, "exchange blocks {a} and {b}"),
            Op::SwapInBlock { block, a, b } => write!(f, "swap columns {a},{b} of block {block}"),
            Op::SwapFree { a, b } => write!(f, "swap free columns {a},{b}"),
            Op::AddUpperRow { target, source, factor } => {
                write!(f, "lower row {target} += {factor} * upper row {source}")
            }
            Op::CombineLowerRows { target, source, factor } => {
                write!(f, "lower row {target} += {factor} * lower row {source}")
            }
            Op::NegateLowerRow { row } => write!(f, "negate lower row {row}"),
            Op::TransformLowerRows { u } => write!(f, "lower rows := {u} * lower rows"),
            Op::RemoveRedundantBlock { block } => write!(f, "remove redundant block {block}"),
        }
    }
}

pub(crate) fn block_order(a: &[Int], b: &[Int]) -> Ordering {
    b.cmp(a)
}

fn is_redundant(b: &[Int]) -> bool {
    b.len() == 1 && b[0].is_one()
}

fn min_blocks_for_relations(v: Variant) -> usize {
    match v {
        Variant::Two => 3,
        Variant::One => 2,
    }
}

/// Sort inside blocks and among blocks, then drop redundant blocks.
pub fn normalize_exponents(e: &ExponentData) -> (Normal<ExponentData>, Vec<Op>) {
    let mut ops = Vec::new();
    let mut blocks = e.blocks.clone();
    for (i, b) in blocks.iter_mut().enumerate() {
        let mut idx: Vec<usize> = (0..b.len()).collect();
        idx.sort_by(|&x, &y| b[y].cmp(&b[x]));
        if idx.iter().enumerate().any(|(k, &x)| k != x) {
            ops.push(Op::SortBlock { block: i, perm: idx.clone() });
            *b = idx.iter().map(|&x| b[x].clone()).collect();
        }
    }
    let mut perm: Vec<usize> = (0..blocks.len()).collect();
    perm.sort_by(|&x, &y| block_order(&blocks[x], &blocks[y]));
    if perm.iter().enumerate().any(|(k, &x)| k != x) {
        ops.push(Op::PermuteBlocks { perm: perm.clone() });
        blocks = perm.iter().map(|&x| blocks[x].clone()).collect();
    }
    let mut out = ExponentData { variant: e.variant, blocks, m: e.m };
    let min = min_blocks_for_relations(e.variant);
    while out.blocks.len() >= min && is_redundant(out.blocks.last().unwrap()) {
        ops.push(Op::RemoveRedundantBlock { block: out.blocks.len() - 1 });
        out.blocks.pop();
    }
    if out.blocks.len() < min {
        return (Normal::Polynomial(out.ring_dimension()), ops);
    }
    (Normal::Ring(out), ops)
}

/// The coefficient data `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    /// Columns in the plane, one per block (variant 2).
    Pairs(Vec<[Rat; 2]>),
    /// Scalars, one per block (variant 1).
    Scalars(Vec<Rat>),
}

impl Coefficients {
    pub fn default_for(e: &ExponentData) -> Self {
        let k = e.blocks.len();
        match e.variant {
            Variant::Two => Coefficients::Pairs((0..k).map(|i| [Rat::one(), Rat::from_integer(Int::from(i))]).collect()),
            Variant::One => Coefficients::Scalars((0..k).map(|i| Rat::from_integer(Int::from(i))).collect()),
        }
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        match self {
            Coefficients::Pairs(v) => Coefficients::Pairs(perm.iter().map(|&i| v[i].clone()).collect()),
            Coefficients::Scalars(v) => Coefficients::Scalars(perm.iter().map(|&i| v[i].clone()).collect()),
        }
    }

    fn truncated(&self, k: usize) -> Self {
        match self {
            Coefficients::Pairs(v) => Coefficients::Pairs(v[..k].to_vec()),
            Coefficients::Scalars(v) => Coefficients::Scalars(v[..k].to_vec()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Coefficients::Pairs(v) => {
                json!([v.iter().map(|p| vec![rat_json(&p[0]), rat_json(&p[1])]).collect::<Vec<_>>()])
            }
            Coefficients::Scalars(v) => json!([v.iter().map(rat_json).collect::<Vec<_>>()]),
        }
    }
}

/// Defining data: exponents, lower rows `d` and optional coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningData {
    pub exponents: ExponentData,
    pub d: IntMatrix,
    pub a: Option<Coefficients>,
}

/// Where a column of `P` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Block { block: usize, index: usize },
    Free(usize),
}

impl DefiningData {
    /// Assemble and validate.
    pub fn new(exponents: ExponentData, d: IntMatrix, a: Option<Coefficients>) -> Result<Self> {
        let data = DefiningData { exponents, d, a };
        let v = data.violations();
        if v.is_empty() {
            Ok(data)
        } else {
            Err(Error::Invalid(v))
        }
    }

    /// Variant 2 data from literals; panics if invalid.
    pub fn two(blocks: &[&[i64]], m: usize, d: &[&[i64]]) -> Self {
        Self::try_two(blocks, m, d).expect("invalid literal defining data")
    }

    pub fn try_two(blocks: &[&[i64]], m: usize, d: &[&[i64]]) -> Result<Self> {
        Self::new(ExponentData::two(blocks, m), IntMatrix::from_i64(d), None)
    }

    pub fn variant(&self) -> Variant {
        self.exponents.variant
    }

    pub fn n(&self) -> usize {
        self.exponents.n()
    }

    pub fn m(&self) -> usize {
        self.exponents.m
    }

    pub fn r(&self) -> usize {
        self.exponents.r()
    }

    pub fn s(&self) -> usize {
        self.d.rows()
    }

    pub fn blocks(&self) -> &[Vec<Int>] {
        &self.exponents.blocks
    }

    /// Dimension of the variety `X(A, P)`.
    pub fn dimension(&self) -> usize {
        self.s() + 1
    }

    pub fn offsets(&self) -> Vec<usize> {
        self.exponents.offsets()
    }

    pub fn column_kind(&self, j: usize) -> ColumnKind {
        let off = self.offsets();
        let n = self.n();
        if j >= n {
            return ColumnKind::Free(j - n);
        }
        let block = off.iter().rposition(|&o| o <= j).unwrap_or(0);
        ColumnKind::Block { block, index: j - off[block] }
    }

    pub fn column_index(&self, block: usize, index: usize) -> usize {
        self.offsets()[block] + index
    }

    pub fn p0(&self) -> IntMatrix {
        self.exponents.p0()
    }

    /// The stacked matrix `P = [P0; d]`.
    pub fn p(&self) -> IntMatrix {
        self.p0().vstack(&self.d).expect("shapes checked at validation")
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        self.p().columns()
    }

    pub fn coefficients(&self) -> Coefficients {
        self.a.clone().unwrap_or_else(|| Coefficients::default_for(&self.exponents))
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = self.exponents.validate();
        if !v.is_empty() {
            return v;
        }
        let cols = self.n() + self.m();
        if self.d.rows() == 0 {
            v.push("d needs at least one row".into());
            return v;
        }
        if self.d.cols() != cols {
            v.push(format!("d has {} columns, expected n+m = {}", self.d.cols(), cols));
            return v;
        }
        let p = self.p();
        let rank = p.rank();
        if rank != p.rows() {
            v.push(format!("P has rank {rank}, expected r+s = {}", p.rows()));
        }
        let columns = p.columns();
        for (j, c) in columns.iter().enumerate() {
            match is_primitive(c) {
                Ok(true) => {}
                Ok(false) => v.push(format!("column {j} = {} is not primitive", fmt_vec(c))),
                Err(_) => v.push(format!("column {j} is zero")),
            }
        }
        for j in 0..columns.len() {
            for k in j + 1..columns.len() {
                if columns[j] == columns[k] {
                    v.push(format!("columns {j} and {k} coincide"));
                }
            }
        }
        if let Some(a) = &self.a {
            let k = self.exponents.blocks.len();
            match (a, self.variant()) {
                (Coefficients::Pairs(p), Variant::Two) if p.len() == k => {
                    for i in 0..k {
                        for j in i + 1..k {
                            if (&p[i][0] * &p[j][1] - &p[i][1] * &p[j][0]).is_zero() {
                                v.push(format!("A columns {i} and {j} are linearly dependent"));
                            }
                        }
                    }
                }
                (Coefficients::Scalars(p), Variant::One) if p.len() == k => {
                    for i in 0..k {
                        for j in i + 1..k {
                            if p[i] == p[j] {
                                v.push(format!("A entries {i} and {j} coincide"));
                            }
                        }
                    }
                }
                _ => v.push(format!("A must have {k} {} entries", if self.variant() == Variant::Two { "pair" } else { "scalar" })),
            }
        }
        v
    }

    // ---- admissible operations ----

    fn reorder_columns(&mut self, order: &[usize]) {
        self.d = self.d.select_cols(order);
    }

    pub fn swap_in_block(&mut self, block: usize, a: usize, b: usize) {
        let (ca, cb) = (self.column_index(block, a), self.column_index(block, b));
        self.exponents.blocks[block].swap(a, b);
        self.d.swap_cols(ca, cb);
    }

    /// Exchange the data of two blocks, including their lower-row entries.
    pub fn exchange_blocks(&mut self, a: usize, b: usize) {
        let mut perm: Vec<usize> = (0..self.exponents.blocks.len()).collect();
        perm.swap(a, b);
        self.permute_blocks(&perm);
    }

    /// New block `k` is old block `perm[k]`.
    pub fn permute_blocks(&mut self, perm: &[usize]) {
        let off = self.offsets();
        let mut order = Vec::new();
        for &i in perm {
            order.extend(off[i]..off[i] + self.exponents.blocks[i].len());
        }
        order.extend(self.n()..self.n() + self.m());
        self.reorder_columns(&order);
        self.exponents.blocks = perm.iter().map(|&i| self.exponents.blocks[i].clone()).collect();
        self.a = self.a.as_ref().map(|a| a.permuted(perm));
    }

    pub fn swap_free(&mut self, a: usize, b: usize) {
        let n = self.n();
        self.d.swap_cols(n + a, n + b);
    }

    /// `d[target] += factor * P0[source]`
    pub fn add_upper_row(&mut self, target: usize, source: usize, factor: &Int) {
        let row = self.p0().row(source);
        for (j, x) in row.iter().enumerate() {
            self.d[(target, j)] += x * factor;
        }
    }

    /// `d[target] += factor * d[source]`
    pub fn combine_lower_rows(&mut self, target: usize, source: usize, factor: &Int) {
        self.d.add_row_multiple(target, source, factor);
    }

    pub fn negate_lower_row(&mut self, row: usize) {
        self.d.negate_row(row);
    }

    /// `d := U d` for a unimodular `U`.
    pub fn transform_lower_rows(&mut self, u: &IntMatrix) -> Result<()> {
        self.d = u.mul(&self.d)?;
        Ok(())
    }

    pub fn apply(&mut self, op: &Op) -> Result<()> {
        match op {
            Op::SortBlock { block, perm } => {
                let off = self.offsets()[*block];
                let mut order: Vec<usize> = (0..self.n() + self.m()).collect();
                for (k, &x) in perm.iter().enumerate() {
                    order[off + k] = off + x;
                }
                self.reorder_columns(&order);
                let b = &self.exponents.blocks[*block];
                self.exponents.blocks[*block] = perm.iter().map(|&x| b[x].clone()).collect();
            }
            Op::PermuteBlocks { perm } => self.permute_blocks(perm),
            Op::ExchangeBlocks { a, b } => self.exchange_blocks(*a, *b),
            Op::SwapInBlock { block, a, b } => self.swap_in_block(*block, *a, *b),
            Op::SwapFree { a, b } => self.swap_free(*a, *b),
            Op::AddUpperRow { target, source, factor } => self.add_upper_row(*target, *source, factor),
            Op::CombineLowerRows { target, source, factor } => self.combine_lower_rows(*target, *source, factor),
            Op::NegateLowerRow { row } => self.negate_lower_row(*row),
            Op::TransformLowerRows { u } => self.transform_lower_rows(u)?,
            Op::RemoveRedundantBlock { block } => self.remove_redundant_block(*block)?,
        }
        Ok(())
    }

    /// Erase a block consisting of a single exponent one together with its
    /// upper row, after clearing its lower-row entries. The block must be the
    /// last one.
    fn remove_redundant_block(&mut self, block: usize) -> Result<()> {
        let k = self.exponents.blocks.len();
        if block + 1 != k || !is_redundant(&self.exponents.blocks[block]) {
            return Err(Error::internal("only a trailing redundant block can be removed"));
        }
        let col = self.column_index(block, 0);
        let row = match self.variant() {
            Variant::Two => block - 1,
            Variant::One => block,
        };
        for t in 0..self.s() {
            let f = -self.d[(t, col)].clone();
            self.add_upper_row(t, row, &f);
        }
        let keep: Vec<usize> = (0..self.n() + self.m()).filter(|&j| j != col).collect();
        self.d = self.d.select_cols(&keep);
        self.exponents.blocks.pop();
        self.a = self.a.as_ref().map(|a| a.truncated(k - 1));
        Ok(())
    }

    /// Sort, reorder and remove redundant blocks using admissible operations.
    pub fn normalize(&self) -> Result<(Normal<DefiningData>, Vec<Op>)> {
        let (_, ops) = normalize_exponents(&self.exponents);
        let mut out = self.clone();
        for op in &ops {
            out.apply(op)?;
        }
        if out.exponents.blocks.len() < min_blocks_for_relations(out.variant()) {
            return Ok((Normal::Polynomial(out.exponents.ring_dimension()), ops));
        }
        Ok((Normal::Ring(out), ops))
    }

    /// Order blocks without removing redundant ones.
    pub fn ordered(&self) -> (DefiningData, Vec<Op>) {
        let (_, ops) = normalize_exponents(&self.exponents);
        let mut out = self.clone();
        let mut applied = Vec::new();
        for op in ops {
            if matches!(op, Op::RemoveRedundantBlock { .. }) {
                continue;
            }
            out.apply(&op).expect("sorting operations always apply");
            applied.push(op);
        }
        (out, applied)
    }

    /// Divisor class group `Z^{n+m} / im(P^T)`.
    pub fn class_group(&self) -> Cokernel {
        cokernel_structure(&self.p().transpose())
    }

    pub fn affine_profile(&self) -> Result<AffineProfile> {
        let cols = self.columns();
        let cone = cone_hull(&cols)?;
        let pointed = cone.is_pointed() && cols.iter().all(|c| cone.is_extremal(c));
        Ok(AffineProfile { pointed, q_factorial: cols.len() == self.p().rank() })
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "format": FORMAT,
            "variant": self.variant().number(),
            "blocks": self.blocks().iter().map(|b| b.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "m": self.m(),
            "d": self.d.to_rows().iter().map(|r| r.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        if let Some(a) = &self.a {
            v["A"] = a.to_json();
        }
        v
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("json values serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineProfile {
    pub pointed: bool,
    pub q_factorial: bool,
}

pub fn fmt_vec(v: &[Int]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

pub fn int_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn rat_json(q: &Rat) -> Value {
    if q.is_integer() {
        int_json(&q.to_integer())
    } else {
        json!(crate::linalg::fmt_rat(q))
    }
}

fn json_int(v: &Value, what: &str) -> Result<Int> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .or_else(|| n.as_u64().map(Int::from))
            .ok_or_else(|| Error::Malformed(format!("{what}: {n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Malformed(format!("{what}: {s:?} is not an integer"))),
        _ => Err(Error::Malformed(format!("{what}: expected an integer"))),
    }
}

fn json_rat(v: &Value, what: &str) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s).ok_or_else(|| Error::Malformed(format!("{what}: {s:?} is not a rational"))),
        _ => json_int(v, what).map(Rat::from_integer),
    }
}

fn json_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Malformed(format!("{what}: expected an array")))
}

/// Parse a defining-data document and validate it.
pub fn parse_validate(text: &str) -> Result<DefiningData> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    from_json(&doc)
}

pub fn from_json(doc: &Value) -> Result<DefiningData> {
    let obj = doc.as_object().ok_or_else(|| Error::Malformed("top level must be an object".into()))?;
    if let Some(f) = obj.get("format") {
        if f.as_str() != Some(FORMAT) {
            return Err(Error::Malformed(format!("unknown format {f}, expected {FORMAT:?}")));
        }
    }
    let variant = match obj.get("variant").and_then(Value::as_u64).unwrap_or(2) {
        1 => Variant::One,
        2 => Variant::Two,
        v => return Err(Error::Malformed(format!("variant must be 1 or 2, got {v}"))),
    };
    let blocks_v = json_array(obj.get("blocks").ok_or_else(|| Error::Malformed("missing \"blocks\"".into()))?, "blocks")?;
    let mut blocks = Vec::new();
    for (i, b) in blocks_v.iter().enumerate() {
        let b = json_array(b, &format!("blocks[{i}]"))?;
        blocks.push(b.iter().enumerate().map(|(j, x)| json_int(x, &format!("blocks[{i}][{j}]"))).collect::<Result<Vec<_>>>()?);
    }
    let m = match obj.get("m") {
        None => 0,
        Some(v) => v.as_u64().ok_or_else(|| Error::Malformed("m must be a nonnegative integer".into()))? as usize,
    };
    let d_v = json_array(obj.get("d").ok_or_else(|| Error::Malformed("missing \"d\"".into()))?, "d")?;
    let mut d_rows = Vec::new();
    for (i, row) in d_v.iter().enumerate() {
        let row = json_array(row, &format!("d[{i}]"))?;
        d_rows.push(row.iter().enumerate().map(|(j, x)| json_int(x, &format!("d[{i}][{j}]"))).collect::<Result<Vec<_>>>()?);
    }
    let d = IntMatrix::from_rows(d_rows).map_err(|_| Error::Malformed("rows of d have different lengths".into()))?;
    let exponents = ExponentData { variant, blocks, m };
    let a = match obj.get("A") {
        None | Some(Value::Null) => None,
        Some(a) => Some(parse_coefficients(a, variant)?),
    };
    DefiningData::new(exponents, d, a)
}

fn parse_coefficients(a: &Value, variant: Variant) -> Result<Coefficients> {
    let mut arr = json_array(a, "A")?;
    let wrapped = arr.len() == 1
        && match variant {
            Variant::Two => arr[0].as_array().is_some_and(|x| x.first().is_some_and(Value::is_array)),
            Variant::One => arr[0].is_array(),
        };
    if wrapped {
        arr = arr[0].as_array().expect("checked above");
    }
    match variant {
        Variant::Two => {
            let mut out = Vec::new();
            for (i, p) in arr.iter().enumerate() {
                let p = json_array(p, &format!("A[{i}]"))?;
                if p.len() != 2 {
                    return Err(Error::Malformed(format!("A[{i}] must be a pair")));
                }
                out.push([json_rat(&p[0], "A")?, json_rat(&p[1], "A")?]);
            }
            Ok(Coefficients::Pairs(out))
        }
        Variant::One => Ok(Coefficients::Scalars(arr.iter().map(|x| json_rat(x, "A")).collect::<Result<Vec<_>>>()?)),
    }
}
